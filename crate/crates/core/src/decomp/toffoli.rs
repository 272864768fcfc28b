//! Toffoli-class building blocks: exact and relative-phase Toffoli, C3X, Pauli basis changes.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;
use std::f64::consts::FRAC_PI_8;

use super::Emitter;
use crate::circuit::QubitRef;
use crate::error::DecompError;
use crate::gate::GateKind;

const T: GateKind = GateKind::Phase(FRAC_PI_4);
const TDG: GateKind = GateKind::Phase(-FRAC_PI_4);

/// Exact Toffoli, 6 CNOTs.
pub fn ccx(em: &mut Emitter, a: QubitRef, b: QubitRef, t: QubitRef) {
    em.h(t);
    em.cx(b, t);
    em.gate(TDG, t);
    em.cx(a, t);
    em.gate(T, t);
    em.cx(b, t);
    em.gate(TDG, t);
    em.cx(a, t);
    em.gate(T, b);
    em.gate(T, t);
    em.h(t);
    em.cx(a, b);
    em.gate(T, a);
    em.gate(TDG, b);
    em.cx(a, b);
}

/// Toffoli up to a diagonal relative phase, 3 CNOTs.
pub fn rccx(em: &mut Emitter, a: QubitRef, b: QubitRef, t: QubitRef) {
    em.h(t);
    em.gate(T, t);
    em.cx(b, t);
    em.gate(TDG, t);
    em.cx(a, t);
    em.gate(T, t);
    em.cx(b, t);
    em.gate(TDG, t);
    em.h(t);
}

/// Inverse of [`rccx`]. The sequence is its own inverse.
pub fn rccx_dg(em: &mut Emitter, a: QubitRef, b: QubitRef, t: QubitRef) {
    rccx(em, a, b, t);
}

/// Exact triply controlled Z as a phase polynomial, 14 CNOTs.
pub fn c3z(em: &mut Emitter, q: [QubitRef; 4]) {
    let p = GateKind::Phase(FRAC_PI_8);
    let m = GateKind::Phase(-FRAC_PI_8);
    for &x in &q {
        em.gate(p, x);
    }
    em.cx(q[0], q[1]);
    em.gate(m, q[1]);
    em.cx(q[0], q[1]);

    em.cx(q[1], q[2]);
    em.gate(m, q[2]);
    em.cx(q[0], q[2]);
    em.gate(p, q[2]);
    em.cx(q[1], q[2]);
    em.gate(m, q[2]);
    em.cx(q[0], q[2]);

    let ladder = [(2, m), (1, p), (2, m), (0, p), (2, m), (1, p), (2, m)];
    for (src, g) in ladder {
        em.cx(q[src], q[3]);
        em.gate(g, q[3]);
    }
    em.cx(q[0], q[3]);
}

pub fn c3x(em: &mut Emitter, a: QubitRef, b: QubitRef, c: QubitRef, t: QubitRef) {
    em.h(t);
    c3z(em, [a, b, c, t]);
    em.h(t);
}

/// Single-qubit gates `(pre, post)` such that `post · X · pre` equals the given Pauli.
pub fn pauli_basis_change(pauli: GateKind) -> Result<(Vec<GateKind>, Vec<GateKind>), DecompError> {
    match pauli {
        GateKind::PauliX => Ok((vec![], vec![])),
        GateKind::PauliY => Ok((
            vec![GateKind::Phase(-FRAC_PI_2)],
            vec![GateKind::Phase(FRAC_PI_2)],
        )),
        GateKind::PauliZ => Ok((vec![GateKind::Hadamard], vec![GateKind::Hadamard])),
        g => Err(DecompError::Unsupported {
            family: "basis change",
            what: g.to_string(),
        }),
    }
}

/// Runs `body` (which emits an X-target construction on `t`) inside the basis change for `pauli`.
pub fn with_basis<F>(
    em: &mut Emitter,
    pauli: GateKind,
    t: QubitRef,
    body: F,
) -> Result<(), DecompError>
where
    F: FnOnce(&mut Emitter) -> Result<(), DecompError>,
{
    let (pre, post) = pauli_basis_change(pauli)?;
    for g in pre {
        em.gate(g, t);
    }
    body(em)?;
    for g in post {
        em.gate(g, t);
    }
    Ok(())
}

/// Exact C2/C3 Pauli without auxiliary qubits (6 or 14 CNOTs).
pub fn specific_pauli(
    em: &mut Emitter,
    pauli: GateKind,
    controls: &[QubitRef],
    t: QubitRef,
) -> Result<(), DecompError> {
    match *controls {
        [a, b] => with_basis(em, pauli, t, |em| {
            ccx(em, a, b, t);
            Ok(())
        }),
        [a, b, c] if pauli == GateKind::PauliZ => {
            c3z(em, [a, b, c, t]);
            Ok(())
        }
        [a, b, c] => with_basis(em, pauli, t, |em| {
            c3x(em, a, b, c, t);
            Ok(())
        }),
        _ => Err(DecompError::Unsupported {
            family: "SpecificPauli",
            what: format!("{} controls", controls.len()),
        }),
    }
}
