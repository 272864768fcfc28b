//! Benchmark circuits (Grover search and amplitude/phase state preparation) and a CNOT-count harness.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builder::Process;
use crate::circuit::{Circuit, Family, QpuSpec, QubitRef};
use crate::compiler::{compile_with, CompileOptions, Policy};
use crate::error::{BenchError, BuildError};
use crate::gate::GateKind;

/// Rotation angles of the binary amplitude tree, stored level by level.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamTree {
    levels: Vec<Vec<f64>>,
}

impl ParamTree {
    /// `probs.len()` must be a power of two, at least 2.
    pub fn new(probs: &[f64]) -> Result<Self, BenchError> {
        let len = probs.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(BenchError::InvalidLengths(len, len));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) || probs.iter().sum::<f64>() <= 0.0 {
            return Err(BenchError::InvalidProbabilities);
        }
        let depth = len.trailing_zeros() as usize;
        let mut levels = Vec::with_capacity(depth);
        for d in 0..depth {
            let block = len >> d;
            let half = block / 2;
            let level = probs
                .chunks(block)
                .map(|c| {
                    let total: f64 = c.iter().sum();
                    if total <= 0.0 {
                        return 0.0;
                    }
                    let right: f64 = c[half..].iter().sum();
                    2.0 * (right / total).clamp(0.0, 1.0).sqrt().asin()
                })
                .collect();
            levels.push(level);
        }
        Ok(ParamTree { levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Angle at `level` for the node reached by the top `level` bits of `path`.
    pub fn angle(&self, level: usize, path: usize) -> f64 {
        self.levels[level][path]
    }
}

/// Runs `body` controlled on `controls` matching the bit pattern `path` (MSB first).
fn on_pattern<F>(
    p: &mut Process,
    controls: &[QubitRef],
    path: usize,
    body: F,
) -> Result<(), BuildError>
where
    F: FnOnce(&mut Process) -> Result<(), BuildError>,
{
    let k = controls.len();
    let zeros: Vec<QubitRef> = (0..k)
        .filter(|&i| (path >> (k - 1 - i)) & 1 == 0)
        .map(|i| controls[i])
        .collect();
    p.with_around(
        |p| zeros.iter().try_for_each(|&q| p.apply(GateKind::PauliX, q)),
        |p| p.with_control(controls, body),
    )
}

/// Prepares `sum_i sqrt(probs[i]/Z) e^{i phases[i]} |i>` from `|0..0>`; qubit 0 is the most significant bit.
pub fn state_prep_circuit(probs: &[f64], phases: &[f64]) -> Result<Circuit, BenchError> {
    if probs.len() != phases.len() {
        return Err(BenchError::InvalidLengths(probs.len(), phases.len()));
    }
    let tree = ParamTree::new(probs)?;
    let n = tree.depth();
    let mut p = Process::new(QpuSpec::new(n));
    let q = p.allocate(n)?;
    for level in 0..n {
        let leaf = level + 1 == n;
        for path in 0..1usize << level {
            let theta = tree.angle(level, path);
            let (p0, p1) = if leaf {
                (phases[2 * path], phases[2 * path + 1])
            } else {
                (0.0, 0.0)
            };
            on_pattern(&mut p, &q[..level], path, |p| {
                p.apply(GateKind::RotY(theta), q[level])?;
                if leaf {
                    p.apply(GateKind::PauliX, q[level])?;
                    p.apply(GateKind::Phase(p0), q[level])?;
                    p.apply(GateKind::PauliX, q[level])?;
                    p.apply(GateKind::Phase(p1), q[level])?;
                }
                Ok(())
            })?;
        }
    }
    Ok(p.into_circuit())
}

pub fn grover_iterations(n: usize) -> usize {
    (PI / 4.0 * (2f64).powi(n as i32).sqrt()).floor() as usize
}

/// Grover search for `|1..1>` on `n >= 2` qubits, ending in a full measurement.
pub fn grover_circuit(n: usize) -> Result<Circuit, BenchError> {
    if n < 2 {
        return Err(BenchError::InvalidLengths(n, n));
    }
    let mut p = Process::new(QpuSpec::new(n));
    let q = p.allocate(n)?;
    let (ctrl, t) = (&q[..n - 1], q[n - 1]);
    for &x in &q {
        p.apply(GateKind::Hadamard, x)?;
    }
    for _ in 0..grover_iterations(n) {
        p.with_control(ctrl, |p| p.apply(GateKind::PauliZ, t))?;
        p.with_around(
            |p| {
                q.iter().try_for_each(|&x| p.apply(GateKind::Hadamard, x))?;
                q.iter().try_for_each(|&x| p.apply(GateKind::PauliX, x))
            },
            |p| p.with_control(ctrl, |p| p.apply(GateKind::PauliZ, t)),
        )?;
    }
    p.measure(&q)?;
    Ok(p.into_circuit())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Grover,
    StatePrep,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Grover => "grover",
            Algorithm::StatePrep => "state-prep",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Algorithm::Grover, Algorithm::StatePrep]
            .into_iter()
            .find(|a| a.name() == s)
    }
}

/// Seeded random instance for `state-prep` at width `n`.
pub fn random_state(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(n as u64));
    let len = 1usize << n;
    let probs: Vec<f64> = (0..len).map(|_| rng.gen_range(f64::EPSILON..1.0)).collect();
    let z: f64 = probs.iter().sum();
    let probs = probs.into_iter().map(|p| p / z).collect();
    let phases = (0..len).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    (probs, phases)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub cnot_total: u64,
    pub per_family: BTreeMap<Family, u64>,
    /// CNOTs emitted outside any decomposition (plain single-control X).
    pub untagged: u64,
    pub single_qubit: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub algorithm: Algorithm,
    pub qpu: usize,
    pub policy: Policy,
    pub seed: Option<u64>,
    pub rows: Vec<BenchRow>,
}

pub fn bench_circuit(alg: Algorithm, n: usize, seed: u64) -> Result<Circuit, BenchError> {
    match alg {
        Algorithm::Grover => grover_circuit(n),
        Algorithm::StatePrep => {
            let (probs, phases) = random_state(n, seed);
            state_prep_circuit(&probs, &phases)
        }
    }
}

/// Compiles one instance in count-only mode.
pub fn run_one(
    alg: Algorithm,
    n: usize,
    qpu: QpuSpec,
    policy: Policy,
    seed: u64,
) -> Result<BenchRow, BenchError> {
    if n > qpu.total {
        return Err(BenchError::TooWide {
            n,
            total: qpu.total,
        });
    }
    let circuit = bench_circuit(alg, n, seed)?;
    let opts = CompileOptions {
        keep_instructions: false,
        ..CompileOptions::with_policy(policy)
    };
    let stats = compile_with(&circuit, qpu, opts)?.report.stats;
    Ok(BenchRow {
        n,
        cnot_total: stats.cnot_total,
        untagged: stats.untagged(),
        single_qubit: stats.single_qubit,
        per_family: stats.per_family,
    })
}

pub fn run_suite(
    alg: Algorithm,
    range: RangeInclusive<usize>,
    qpu: QpuSpec,
    policy: Policy,
    seed: u64,
) -> Result<BenchReport, BenchError> {
    if range.is_empty() {
        return Err(BenchError::EmptyRange(*range.start(), *range.end()));
    }
    let rows = range
        .into_par_iter()
        .map(|n| run_one(alg, n, qpu, policy, seed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BenchReport {
        algorithm: alg,
        qpu: qpu.total,
        policy,
        seed: (alg == Algorithm::StatePrep).then_some(seed),
        rows,
    })
}

impl BenchReport {
    fn columns(&self) -> Vec<Family> {
        Family::ALL
            .into_iter()
            .filter(|f| self.rows.iter().any(|r| r.per_family.contains_key(f)))
            .collect()
    }

    fn untagged_column(&self) -> bool {
        self.rows.iter().any(|r| r.untagged > 0)
    }

    /// Fixed-width text table; families absent from a row show as `--`.
    pub fn to_table(&self) -> String {
        let cols = self.columns();
        let mut head: Vec<String> = vec!["n".into()];
        head.extend(cols.iter().map(|f| f.name().to_string()));
        if self.untagged_column() {
            head.push("plain".into());
        }
        head.push("Total".into());
        let body: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let mut cells = vec![r.n.to_string()];
                cells.extend(
                    cols.iter()
                        .map(|f| r.per_family.get(f).map_or("--".into(), |c| c.to_string())),
                );
                if self.untagged_column() {
                    cells.push(r.untagged.to_string());
                }
                cells.push(r.cnot_total.to_string());
                cells
            })
            .collect();
        let widths: Vec<usize> = (0..head.len())
            .map(|i| {
                body.iter()
                    .map(|r| r[i].len())
                    .chain([head[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# {} qpu={} policy={}{}",
            self.algorithm.name(),
            self.qpu,
            self.policy.name(),
            self.seed.map(|x| format!(" seed={x}")).unwrap_or_default()
        );
        for row in std::iter::once(&head).chain(body.iter()) {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            let _ = writeln!(s, "{}", cells.join("  ").trim_end());
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,");
        for f in Family::ALL {
            s.push_str(f.name());
            s.push(',');
        }
        s.push_str("untagged,total\n");
        for r in &self.rows {
            let _ = write!(s, "{},", r.n);
            for f in Family::ALL {
                let _ = write!(s, "{},", r.per_family.get(&f).copied().unwrap_or(0));
            }
            let _ = writeln!(s, "{},{}", r.untagged, r.cnot_total);
        }
        s
    }
}
