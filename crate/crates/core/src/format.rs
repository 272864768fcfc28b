//! Line-oriented JSON circuit files and a QASM-like text export.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Family, Instruction, QpuSpec, QubitRef};
use crate::error::{CircuitError, FormatError};
use crate::gate::GateKind;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    qubits: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    gate: String,
    #[serde(default)]
    params: Vec<f64>,
    target: usize,
    #[serde(default)]
    controls: Vec<usize>,
    #[serde(default)]
    tag: Option<String>,
    #[serde(default, skip_serializing_if = "is_zero")]
    global_phase: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

fn index(q: QubitRef) -> Result<usize, CircuitError> {
    q.main_index().ok_or(CircuitError::UnexpectedAux(q))
}

/// Number of lines a file for `c` must declare.
pub fn declared_width(c: &Circuit) -> usize {
    let used = c
        .instructions
        .iter()
        .flat_map(|i| i.qubits())
        .chain(c.measured.iter().copied())
        .filter_map(|q| q.main_index())
        .map(|i| i + 1)
        .max()
        .unwrap_or(0);
    used.max(c.allocated)
}

pub fn write_json<W: Write>(c: &Circuit, mut w: W) -> Result<(), FormatError> {
    writeln!(
        w,
        "{}",
        line(&Header {
            qubits: declared_width(c)
        })
    )?;
    for i in &c.instructions {
        let rec = Record {
            gate: i.gate.name().to_string(),
            params: i.gate.params(),
            target: index(i.target)?,
            controls: i
                .controls
                .iter()
                .map(|&q| index(q))
                .collect::<Result<_, _>>()?,
            tag: i.tag.map(|t| t.name().to_string()),
            global_phase: i.global_phase,
        };
        writeln!(w, "{}", line(&rec))?;
    }
    for &q in &c.measured {
        let rec = Record {
            gate: "measure".into(),
            params: vec![],
            target: index(q)?,
            controls: vec![],
            tag: None,
            global_phase: 0.0,
        };
        writeln!(w, "{}", line(&rec))?;
    }
    Ok(())
}

pub fn to_json_string(c: &Circuit) -> Result<String, FormatError> {
    let mut buf = Vec::new();
    write_json(c, &mut buf)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

fn line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain records always serialize")
}

pub fn read_json<R: BufRead>(r: R) -> Result<Circuit, FormatError> {
    let mut circuit: Option<Circuit> = None;
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = n + 1;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let perr = |msg: String| FormatError::Parse { line: lineno, msg };
        let Some(c) = circuit.as_mut() else {
            let h: Header =
                serde_json::from_str(text).map_err(|e| perr(format!("bad header: {e}")))?;
            if h.qubits == 0 {
                return Err(perr("header declares zero qubits".into()));
            }
            let mut c = Circuit::new(QpuSpec::new(h.qubits));
            c.allocated = h.qubits;
            circuit = Some(c);
            continue;
        };
        let rec: Record = serde_json::from_str(text).map_err(|e| perr(e.to_string()))?;
        if rec.gate == "measure" {
            c.measure(QubitRef::Main(rec.target))?;
            continue;
        }
        let gate = GateKind::from_name(&rec.gate, &rec.params).ok_or_else(|| {
            perr(format!(
                "unknown gate {:?} with {} params",
                rec.gate,
                rec.params.len()
            ))
        })?;
        let tag = match rec.tag.as_deref() {
            None => None,
            Some(t) => {
                Some(Family::from_name(t).ok_or_else(|| perr(format!("unknown tag {t:?}")))?)
            }
        };
        let controls: Vec<QubitRef> = rec.controls.iter().map(|&i| QubitRef::Main(i)).collect();
        if controls
            .iter()
            .enumerate()
            .any(|(k, q)| controls[..k].contains(q))
        {
            return Err(perr("duplicate control".into()));
        }
        let instr = Instruction::controlled(gate, &controls, QubitRef::Main(rec.target))
            .with_phase(rec.global_phase)
            .with_tag(tag);
        c.push(instr)?;
    }
    circuit.ok_or(FormatError::MissingHeader)
}

pub fn from_json_str(s: &str) -> Result<Circuit, FormatError> {
    read_json(s.as_bytes())
}

fn fmt_params(g: &GateKind) -> String {
    match g.params().first() {
        Some(t) => format!("({t})"),
        None => String::new(),
    }
}

/// Diagnostic text form: one gate per line.
pub fn to_qasm_like(c: &Circuit) -> Result<String, FormatError> {
    let mut s = String::new();
    let _ = writeln!(s, "qubits {};", declared_width(c));
    for i in &c.instructions {
        let t = index(i.target)?;
        let name = match i.controls.len() {
            0 => i.gate.name().to_string(),
            1 => format!("c{}", i.gate.name()),
            k => format!("c{k}{}", i.gate.name()),
        };
        let mut args: Vec<String> = i
            .controls
            .iter()
            .map(|&q| index(q).map(|x| format!("q[{x}]")))
            .collect::<Result<_, _>>()?;
        args.push(format!("q[{t}]"));
        let _ = writeln!(s, "{name}{} {};", fmt_params(&i.gate), args.join(", "));
    }
    for &q in &c.measured {
        let _ = writeln!(s, "measure q[{}];", index(q)?);
    }
    Ok(s)
}
