//! Dense statevector and unitary oracle. Qubit 0 of a register is the most significant bit.

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{Circuit, Instruction, QubitRef};
use crate::error::SimError;
use crate::gate::{phased_matrix, Mat2, C64};

/// Largest register for which full unitaries are built or verified.
pub const MAX_UNITARY_QUBITS: usize = 13;
/// Largest register accepted for plain statevector runs.
pub const MAX_STATE_QUBITS: usize = 24;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Ordered list of simulated lines.
#[derive(Debug, Clone)]
pub struct Register {
    lines: Vec<QubitRef>,
}

impl Register {
    pub fn new(lines: Vec<QubitRef>) -> Self {
        Register { lines }
    }

    pub fn mains(n: usize) -> Self {
        Register {
            lines: (0..n).map(QubitRef::Main).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn lines(&self) -> &[QubitRef] {
        &self.lines
    }

    fn bit(&self, q: QubitRef) -> Result<usize, SimError> {
        let pos = self
            .lines
            .iter()
            .position(|&l| l == q)
            .ok_or(SimError::UnknownQubit(q))?;
        Ok(1usize << (self.lines.len() - 1 - pos))
    }
}

#[derive(Debug, Clone, Copy)]
struct Op {
    m: Mat2,
    target: usize,
    mask: usize,
}

fn lower(instrs: &[Instruction], reg: &Register) -> Result<Vec<Op>, SimError> {
    instrs
        .iter()
        .map(|i| {
            let mut mask = 0;
            for &c in &i.controls {
                mask |= reg.bit(c)?;
            }
            Ok(Op {
                m: phased_matrix(&i.gate, i.global_phase),
                target: reg.bit(i.target)?,
                mask,
            })
        })
        .collect()
}

fn apply_ops(ops: &[Op], amps: &mut [C64]) {
    for op in ops {
        let t = op.target;
        for i in 0..amps.len() {
            if i & t != 0 || i & op.mask != op.mask {
                continue;
            }
            let (a, b) = (amps[i], amps[i | t]);
            amps[i] = op.m[0][0] * a + op.m[0][1] * b;
            amps[i | t] = op.m[1][0] * a + op.m[1][1] * b;
        }
    }
}

/// Applies `instrs` to `amps` in place.
pub fn apply(instrs: &[Instruction], reg: &Register, amps: &mut [C64]) -> Result<(), SimError> {
    if amps.len() != 1usize << reg.len() {
        return Err(SimError::DimensionMismatch(amps.len(), 1usize << reg.len()));
    }
    apply_ops(&lower(instrs, reg)?, amps);
    Ok(())
}

/// Runs a circuit from |0...0⟩ over its first `n` Main lines. Measurements are ignored.
pub fn run_statevector(circuit: &Circuit, n: usize) -> Result<Vec<C64>, SimError> {
    if n > MAX_STATE_QUBITS {
        return Err(SimError::TooLarge(n, MAX_STATE_QUBITS));
    }
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    amps[0] = C64::new(1.0, 0.0);
    apply(&circuit.instructions, &Register::mains(n), &mut amps)?;
    Ok(amps)
}

/// Column-major dense unitary.
#[derive(Debug, Clone)]
pub struct DenseUnitary {
    pub qubits: usize,
    data: Vec<C64>,
}

impl DenseUnitary {
    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[col * self.dim() + row]
    }

    pub fn column(&self, col: usize) -> &[C64] {
        let d = self.dim();
        &self.data[col * d..(col + 1) * d]
    }

    pub fn from_instructions(instrs: &[Instruction], reg: &Register) -> Result<Self, SimError> {
        let k = reg.len();
        if k > MAX_UNITARY_QUBITS {
            return Err(SimError::TooLarge(k, MAX_UNITARY_QUBITS));
        }
        let ops = lower(instrs, reg)?;
        let dim = 1usize << k;
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        data.par_chunks_mut(dim)
            .enumerate()
            .for_each(|(col, amps)| {
                amps[col] = C64::new(1.0, 0.0);
                apply_ops(&ops, amps);
            });
        Ok(DenseUnitary { qubits: k, data })
    }

    /// Frobenius norm of `U U† - I`.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for a in 0..d {
            for b in 0..d {
                let dot: C64 = self
                    .column(a)
                    .iter()
                    .zip(self.column(b))
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let e = if a == b { dot - 1.0 } else { dot };
                acc += e.norm_sqr();
            }
        }
        acc.sqrt()
    }
}

pub fn circuit_unitary(
    circuit: &Circuit,
    qubit_order: &[QubitRef],
) -> Result<DenseUnitary, SimError> {
    if !circuit.measured.is_empty() {
        return Err(SimError::ContainsMeasurement);
    }
    DenseUnitary::from_instructions(&circuit.instructions, &Register::new(qubit_order.to_vec()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub equal: bool,
    pub phase: f64,
    pub max_abs_deviation: f64,
}

pub fn equal_up_to_global_phase(
    u: &DenseUnitary,
    v: &DenseUnitary,
    tol: f64,
) -> Result<EquivalenceReport, SimError> {
    if u.qubits != v.qubits {
        return Err(SimError::DimensionMismatch(u.dim(), v.dim()));
    }
    let (mut best, mut idx) = (-1.0, 0);
    for (k, z) in u.data.iter().enumerate() {
        if z.norm() > best {
            best = z.norm();
            idx = k;
        }
    }
    let phase = if v.data[idx].norm() > 0.0 {
        (v.data[idx] / u.data[idx]).arg()
    } else {
        0.0
    };
    let rot = C64::from_polar(1.0, phase);
    let dev = u
        .data
        .iter()
        .zip(&v.data)
        .map(|(a, b)| (a * rot - b).norm())
        .fold(0.0, f64::max);
    Ok(EquivalenceReport {
        equal: dev <= tol,
        phase,
        max_abs_deviation: dev,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxInit {
    Clean,
    Dirty,
}

/// Checks `emitted` against `ideal` acting on `mains`, with `aux` lines either
/// starting in |0⟩ (clean) or arbitrary (dirty, full factorization).
///
/// Every column is simulated independently, so the full matrix is never stored.
pub fn verify_lines(
    ideal: &[Instruction],
    emitted: &[Instruction],
    mains: &[QubitRef],
    aux: &[QubitRef],
    init: AuxInit,
    tol: f64,
) -> Result<EquivalenceReport, SimError> {
    let mut lines = mains.to_vec();
    lines.extend_from_slice(aux);
    let k = lines.len();
    if k > MAX_UNITARY_QUBITS {
        return Err(SimError::TooLarge(k, MAX_UNITARY_QUBITS));
    }
    let reg = Register::new(lines);
    let got_ops = lower(emitted, &reg)?;
    let want_ops = lower(ideal, &reg)?;
    let dim = 1usize << k;
    let columns: Vec<usize> = match init {
        AuxInit::Dirty => (0..dim).collect(),
        AuxInit::Clean => (0..1usize << mains.len()).map(|m| m << aux.len()).collect(),
    };
    let run = |col: usize| {
        let mut got = vec![C64::new(0.0, 0.0); dim];
        got[col] = C64::new(1.0, 0.0);
        let mut want = got.clone();
        apply_ops(&got_ops, &mut got);
        apply_ops(&want_ops, &mut want);
        (got, want)
    };
    let (g0, w0) = run(columns[0]);
    let idx = (0..dim)
        .max_by(|&a, &b| w0[a].norm().total_cmp(&w0[b].norm()))
        .unwrap_or(0);
    let phase = if g0[idx].norm() > 0.0 {
        (g0[idx] / w0[idx]).arg()
    } else {
        0.0
    };
    let rot = C64::from_polar(1.0, phase);
    let dev = columns
        .par_iter()
        .map(|&col| {
            let (g, w) = run(col);
            g.iter()
                .zip(&w)
                .map(|(a, b)| (b * rot - a).norm())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(EquivalenceReport {
        equal: dev <= tol,
        phase,
        max_abs_deviation: dev,
    })
}

/// End-to-end check of a compiled circuit against its source: qubits the source touches may
/// start in any state, untouched ones start in |0⟩ and must return there.
pub fn verify_compiled(
    source: &Circuit,
    compiled: &Circuit,
    tol: f64,
) -> Result<EquivalenceReport, SimError> {
    let total = compiled.qpu.total.max(source.width());
    let (mut dirty, mut clean) = (Vec::new(), Vec::new());
    for i in 0..total {
        let touched = source
            .qubit_state
            .get(i)
            .is_some_and(|s| *s == crate::circuit::QubitState::Dirty);
        if touched {
            dirty.push(QubitRef::Main(i))
        } else {
            clean.push(QubitRef::Main(i))
        }
    }
    verify_lines(
        &source.instructions,
        &compiled.instructions,
        &dirty,
        &clean,
        AuxInit::Clean,
        tol,
    )
}

/// Standard layout: controls `Main(0..n)`, target `Main(n)`, aux `Aux{group 0, index i}`.
pub fn standard_lines(
    n_controls: usize,
    aux_count: usize,
) -> (Vec<QubitRef>, QubitRef, Vec<QubitRef>) {
    let controls = (0..n_controls).map(QubitRef::Main).collect();
    let aux = (0..aux_count)
        .map(|index| QubitRef::Aux { group: 0, index })
        .collect();
    (controls, QubitRef::Main(n_controls), aux)
}

/// Verifies a decomposition emitted on [`standard_lines`].
pub fn verify_decomposition(
    gate: crate::gate::GateKind,
    global_phase: f64,
    n_controls: usize,
    emitted: &[Instruction],
    aux_count: usize,
    init: AuxInit,
    tol: f64,
) -> Result<EquivalenceReport, SimError> {
    let (controls, target, aux) = standard_lines(n_controls, aux_count);
    let ideal = Instruction::controlled(gate, &controls, target).with_phase(global_phase);
    let mut mains = controls;
    mains.push(target);
    verify_lines(&[ideal], emitted, &mains, &aux, init, tol)
}
