use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use qdecomp::bench::{run_suite, Algorithm};
use qdecomp::compiler::{compile_with, CompileOptions};
use qdecomp::format::{declared_width, read_json, to_json_string, to_qasm_like};
use qdecomp::sim::{verify_lines, AuxInit, MAX_UNITARY_QUBITS};
use qdecomp::{
    BenchError, Circuit, CompileError, FormatError, GateKind, Instruction, QpuSpec, QubitRef,
    SimError,
};
use serde::{Deserialize, Serialize};

use crate::config::{CliConfig, OutputFormat};
use crate::CliError;

fn read_circuit(path: &Path) -> Result<Circuit, CliError> {
    let f = File::open(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    read_json(BufReader::new(f)).map_err(|e| match e {
        FormatError::Io(e) => CliError::Io(e),
        e => CliError::Parse(format!("{}: {e}", path.display())),
    })
}

fn compile_error(e: CompileError) -> CliError {
    match e {
        CompileError::Capacity { .. } | CompileError::AllocationImpossible { .. } => {
            CliError::Capacity(e.to_string())
        }
        e => CliError::Usage(e.to_string()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct Summary {
    input: PathBuf,
    qpu: usize,
    policy: &'static str,
    cnot_total: u64,
    per_family: BTreeMap<String, u64>,
    untagged: u64,
    single_qubit: u64,
    decompositions: usize,
    circuit: PathBuf,
    report: PathBuf,
}

pub fn compile(input: &Path, cfg: &CliConfig, out: Option<&Path>) -> Result<u8, CliError> {
    let source = read_circuit(input)?;
    let compiled = compile_with(
        &source,
        QpuSpec::new(cfg.qpu_total),
        CompileOptions::with_policy(cfg.policy),
    )
    .map_err(compile_error)?;
    let qasm = cfg.output_format == OutputFormat::Qasm;
    let circuit_path = out.map(Path::to_path_buf).unwrap_or_else(|| {
        input.with_extension(if qasm {
            "compiled.qasm"
        } else {
            "compiled.jsonl"
        })
    });
    let report_path = circuit_path.with_extension("report.json");
    let body = if qasm {
        to_qasm_like(&compiled.circuit)
    } else {
        to_json_string(&compiled.circuit)
    };
    std::fs::write(
        &circuit_path,
        body.map_err(|e| CliError::Usage(e.to_string()))?,
    )?;
    let report = serde_json::to_string_pretty(&compiled.report).expect("report is plain data");
    std::fs::write(&report_path, report + "\n")?;

    let stats = &compiled.report.stats;
    let summary = Summary {
        input: input.to_path_buf(),
        qpu: cfg.qpu_total,
        policy: cfg.policy.name(),
        cnot_total: stats.cnot_total,
        per_family: stats
            .per_family
            .iter()
            .map(|(f, c)| (f.name().to_string(), *c))
            .collect(),
        untagged: stats.untagged(),
        single_qubit: stats.single_qubit,
        decompositions: compiled.report.choices.len(),
        circuit: circuit_path,
        report: report_path,
    };
    if cfg.output_format == OutputFormat::Table {
        println!("cnot_total     {}", summary.cnot_total);
        for (f, c) in &summary.per_family {
            println!("  {f:<12} {c}");
        }
        println!("single_qubit   {}", summary.single_qubit);
        println!("decompositions {}", summary.decompositions);
    } else {
        println!(
            "{}",
            serde_json::to_string_pretty(&summary).expect("summary is plain data")
        );
    }
    Ok(0)
}

/// The gate a file is expected to implement, on its own line numbering.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealGate {
    gate: String,
    #[serde(default)]
    params: Vec<f64>,
    #[serde(default)]
    controls: Vec<usize>,
    target: usize,
    #[serde(default)]
    global_phase: f64,
    /// Initial state of the lines outside the gate: "clean" (|0>) or "dirty" (arbitrary).
    #[serde(default)]
    aux: AuxMode,
}

#[derive(Debug, Default, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum AuxMode {
    #[default]
    Clean,
    Dirty,
}

fn load_ideal(arg: &str) -> Result<IdealGate, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Parse(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("ideal descriptor: {e}")))
}

pub fn verify(input: &Path, ideal: &str, cfg: &CliConfig) -> Result<u8, CliError> {
    let circuit = read_circuit(input)?;
    let ideal = load_ideal(ideal)?;
    let gate = GateKind::from_name(&ideal.gate, &ideal.params).ok_or_else(|| {
        CliError::Parse(format!("ideal descriptor: unknown gate {:?}", ideal.gate))
    })?;
    if ideal.controls.contains(&ideal.target) {
        return Err(CliError::Parse(
            "ideal descriptor: target among controls".into(),
        ));
    }
    let top = ideal
        .controls
        .iter()
        .chain([&ideal.target])
        .map(|i| i + 1)
        .max()
        .unwrap_or(0);
    let width = declared_width(&circuit).max(top);
    if width > MAX_UNITARY_QUBITS {
        return Err(CliError::TooLarge(format!(
            "{width} qubits exceeds the oracle limit of {MAX_UNITARY_QUBITS}"
        )));
    }
    let controls: Vec<QubitRef> = ideal.controls.iter().map(|&i| QubitRef::Main(i)).collect();
    let target = QubitRef::Main(ideal.target);
    let want = Instruction::controlled(gate, &controls, target).with_phase(ideal.global_phase);
    let mut mains = controls.clone();
    mains.push(target);
    let aux: Vec<QubitRef> = (0..width)
        .map(QubitRef::Main)
        .filter(|q| !mains.contains(q))
        .collect();
    let init = match ideal.aux {
        AuxMode::Clean => AuxInit::Clean,
        AuxMode::Dirty => AuxInit::Dirty,
    };
    let report = verify_lines(
        &[want],
        &circuit.instructions,
        &mains,
        &aux,
        init,
        cfg.tolerance,
    )
    .map_err(|e| match e {
        SimError::TooLarge(..) => CliError::TooLarge(e.to_string()),
        e => CliError::Usage(e.to_string()),
    })?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report is plain data")
    );
    Ok(if report.equal { 0 } else { 1 })
}

/// Accepts `a..b` and `a..=b` (both inclusive) or a single width.
pub fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("invalid range {s:?}; expected a..b"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => Ok((num(a)?, num(b.strip_prefix('=').unwrap_or(b))?)),
        None => num(s).map(|n| (n, n)),
    }
}

pub fn bench(
    algorithm: &str,
    range: &str,
    seed: u64,
    cfg: &CliConfig,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let alg = Algorithm::parse(algorithm).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown algorithm {algorithm:?}; expected grover or state-prep"
        ))
    })?;
    let (a, b) = parse_range(range)?;
    if cfg.output_format == OutputFormat::Qasm {
        return Err(CliError::Usage(
            "bench output must be json, table or csv".into(),
        ));
    }
    let report = run_suite(alg, a..=b, QpuSpec::new(cfg.qpu_total), cfg.policy, seed).map_err(
        |e| match e {
            BenchError::Compile(e) => compile_error(e),
            e => CliError::Usage(e.to_string()),
        },
    )?;
    let text = match cfg.output_format {
        OutputFormat::Table => report.to_table(),
        OutputFormat::Csv => report.to_csv(),
        _ => serde_json::to_string_pretty(&report).expect("report is plain data") + "\n",
    };
    emit(out, &text)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..9").unwrap(), (2, 9));
        assert_eq!(parse_range("2..=9").unwrap(), (2, 9));
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        assert!(parse_range("a..3").is_err());
        assert!(parse_range("..3").is_err());
    }

    #[test]
    fn ideal_descriptor_defaults() {
        let g = load_ideal(r#"{"gate":"p","params":[0.5],"controls":[0,1],"target":2}"#).unwrap();
        assert!(matches!(g.aux, AuxMode::Clean));
        assert_eq!(g.global_phase, 0.0);
        assert!(load_ideal(r#"{"gate":"x","target":0,"bogus":1}"#).is_err());
    }
}
