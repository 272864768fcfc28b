//! Toffoli ladders through auxiliary lines: V-Chain (clean or borrowed) and Single-Aux.

use super::toffoli::{ccx, rccx, rccx_dg, with_basis};
use super::{AuxState, Emitter};
use crate::circuit::QubitRef;
use crate::error::DecompError;
use crate::gate::GateKind;

const T: GateKind = GateKind::Phase(std::f64::consts::FRAC_PI_4);
const TDG: GateKind = GateKind::Phase(-std::f64::consts::FRAC_PI_4);

fn action(em: &mut Emitter, q0: QubitRef, q1: QubitRef, q2: QubitRef) {
    em.h(q2);
    em.gate(T, q2);
    em.cx(q0, q2);
    em.gate(TDG, q2);
    em.cx(q1, q2);
}

fn reset(em: &mut Emitter, q0: QubitRef, q1: QubitRef, q2: QubitRef) {
    em.cx(q1, q2);
    em.gate(T, q2);
    em.cx(q0, q2);
    em.gate(TDG, q2);
    em.h(q2);
}

/// Number of borrowed lines [`mcx_dirty`] needs for `k` controls.
pub fn dirty_lines_needed(k: usize) -> usize {
    k.saturating_sub(2)
}

/// Exact `C^k X` borrowing `k - 2` lines from `borrow` in any state (8k - 6 CNOTs for k >= 3).
pub fn mcx_dirty(
    em: &mut Emitter,
    controls: &[QubitRef],
    t: QubitRef,
    borrow: &[QubitRef],
) -> Result<(), DecompError> {
    let k = controls.len();
    match k {
        0 => em.gate(GateKind::PauliX, t),
        1 => em.cx(controls[0], t),
        2 => ccx(em, controls[0], controls[1], t),
        _ => {
            let need = dirty_lines_needed(k);
            if borrow.len() < need {
                return Err(DecompError::AuxCount {
                    family: "VChain",
                    needed: need,
                    got: borrow.len(),
                });
            }
            let a = &borrow[..need];
            for _ in 0..2 {
                ccx(em, controls[k - 1], a[k - 3], t);
                for i in (0..k - 3).rev() {
                    action(em, controls[i + 2], a[i], a[i + 1]);
                }
                rccx(em, controls[0], controls[1], a[0]);
                for i in 0..k - 3 {
                    reset(em, controls[i + 2], a[i], a[i + 1]);
                }
            }
        }
    }
    Ok(())
}

/// Exact `C^k X` computing the AND ladder into `k - 2` clean lines (6k - 6 CNOTs).
pub fn mcx_clean(
    em: &mut Emitter,
    controls: &[QubitRef],
    t: QubitRef,
    aux: &[QubitRef],
) -> Result<(), DecompError> {
    let k = controls.len();
    if k < 3 {
        return mcx_dirty(em, controls, t, &[]);
    }
    if aux.len() < k - 2 {
        return Err(DecompError::AuxCount {
            family: "VChain",
            needed: k - 2,
            got: aux.len(),
        });
    }
    rccx(em, controls[0], controls[1], aux[0]);
    for i in 0..k - 3 {
        rccx(em, controls[i + 2], aux[i], aux[i + 1]);
    }
    ccx(em, controls[k - 1], aux[k - 3], t);
    for i in (0..k - 3).rev() {
        rccx_dg(em, controls[i + 2], aux[i], aux[i + 1]);
    }
    rccx_dg(em, controls[0], controls[1], aux[0]);
    Ok(())
}

pub fn vchain(
    em: &mut Emitter,
    pauli: GateKind,
    controls: &[QubitRef],
    t: QubitRef,
    aux: &[QubitRef],
    state: AuxState,
) -> Result<(), DecompError> {
    if controls.len() < 3 {
        return Err(DecompError::Unsupported {
            family: "VChain",
            what: format!("{} controls", controls.len()),
        });
    }
    with_basis(em, pauli, t, |em| match state {
        AuxState::Clean => mcx_clean(em, controls, t, aux),
        _ => mcx_dirty(em, controls, t, aux),
    })
}

/// Splits `C^n X` through one auxiliary line into two half-size gates that borrow each other's controls.
pub fn single_aux(
    em: &mut Emitter,
    pauli: GateKind,
    controls: &[QubitRef],
    t: QubitRef,
    aux: &[QubitRef],
    state: AuxState,
) -> Result<(), DecompError> {
    let n = controls.len();
    if n < 3 {
        return Err(DecompError::Unsupported {
            family: "SingleAux",
            what: format!("{n} controls"),
        });
    }
    let &[a] = aux else {
        return Err(DecompError::AuxCount {
            family: "SingleAux",
            needed: 1,
            got: aux.len(),
        });
    };
    let k1 = n.div_ceil(2);
    let (first, rest) = controls.split_at(k1);
    let mut borrow1: Vec<QubitRef> = rest.to_vec();
    borrow1.push(t);
    borrow1.sort();
    let mut second: Vec<QubitRef> = rest.to_vec();
    second.push(a);
    let mut borrow2: Vec<QubitRef> = first.to_vec();
    borrow2.sort();

    with_basis(em, pauli, t, |em| {
        let blocks = if state == AuxState::Clean { 3 } else { 4 };
        for b in 0..blocks {
            if b % 2 == 0 {
                mcx_dirty(em, first, a, &borrow1)?;
            } else {
                mcx_dirty(em, &second, t, &borrow2)?;
            }
        }
        Ok(())
    })
}
