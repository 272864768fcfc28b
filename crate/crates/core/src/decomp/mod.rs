//! Decompositions of multi-controlled single-target gates into single-qubit gates and CNOTs.

pub mod factors;
pub mod su2;
pub mod toffoli;
pub mod vchain;

use serde::{Deserialize, Serialize};

use crate::circuit::{Family, Instruction, QubitRef};
use crate::error::DecompError;
use crate::gate::{phased_matrix, GateClass, GateKind};

pub use factors::{Su2Factors, ZyzFactors};
pub use toffoli::pauli_basis_change;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AuxState {
    Clean,
    Dirty,
    NotApplicable,
}

/// A decomposition family together with its auxiliary-line requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecompChoice {
    pub family: Family,
    pub aux_count: usize,
    pub aux_state: AuxState,
}

impl DecompChoice {
    pub fn no_aux(family: Family) -> Self {
        DecompChoice {
            family,
            aux_count: 0,
            aux_state: AuxState::NotApplicable,
        }
    }

    pub fn with_aux(family: Family, aux_count: usize, aux_state: AuxState) -> Self {
        DecompChoice {
            family,
            aux_count,
            aux_state,
        }
    }
}

/// Collects emitted instructions, all stamped with one provenance tag.
#[derive(Debug, Clone)]
pub struct Emitter {
    pub out: Vec<Instruction>,
    tag: Option<Family>,
}

impl Emitter {
    pub fn new(tag: Option<Family>) -> Self {
        Emitter {
            out: Vec::new(),
            tag,
        }
    }

    /// Uncontrolled gate; parameterized gates with a zero angle are dropped.
    pub fn gate(&mut self, g: GateKind, t: QubitRef) {
        if !g.is_zero_angle() {
            self.out.push(Instruction::new(g, t).with_tag(self.tag));
        }
    }

    pub fn h(&mut self, t: QubitRef) {
        self.gate(GateKind::Hadamard, t);
    }

    pub fn cx(&mut self, c: QubitRef, t: QubitRef) {
        self.out.push(Instruction::cx(c, t).with_tag(self.tag));
    }

    pub fn cnot_count(&self) -> usize {
        self.out.iter().filter(|i| i.is_cnot()).count()
    }
}

fn pauli_only(family: &'static str, gate: GateKind) -> Result<(), DecompError> {
    match gate.class() {
        GateClass::Pauli => Ok(()),
        _ => Err(DecompError::Unsupported {
            family,
            what: gate.to_string(),
        }),
    }
}

fn run<F>(family: Family, f: F) -> Result<Vec<Instruction>, DecompError>
where
    F: FnOnce(&mut Emitter) -> Result<(), DecompError>,
{
    let mut em = Emitter::new(Some(family));
    f(&mut em)?;
    Ok(em.out)
}

pub fn decompose_cu2(
    gate: GateKind,
    global_phase: f64,
    control: QubitRef,
    target: QubitRef,
) -> Vec<Instruction> {
    let mut em = Emitter::new(Some(Family::CU2));
    if gate.class() == GateClass::Pauli && global_phase == 0.0 {
        su2::cu2_pauli(&mut em, gate, control, target).expect("Pauli gates have a basis change");
    } else {
        su2::cu2(
            &mut em,
            &phased_matrix(&gate, global_phase),
            control,
            target,
        );
    }
    em.out
}

pub fn decompose_specific_pauli(
    pauli: GateKind,
    controls: &[QubitRef],
    target: QubitRef,
) -> Result<Vec<Instruction>, DecompError> {
    run(Family::SpecificPauli, |em| {
        toffoli::specific_pauli(em, pauli, controls, target)
    })
}

pub fn approx_toffoli(c1: QubitRef, c2: QubitRef, target: QubitRef) -> Vec<Instruction> {
    let mut em = Emitter::new(Some(Family::ApproxToffoli));
    toffoli::rccx(&mut em, c1, c2, target);
    em.out
}

pub fn decompose_network(
    gate: GateKind,
    global_phase: f64,
    controls: &[QubitRef],
    target: QubitRef,
    aux: &[QubitRef],
) -> Result<Vec<Instruction>, DecompError> {
    run(Family::Network, |em| {
        su2::network(
            em,
            &phased_matrix(&gate, global_phase),
            controls,
            target,
            aux,
        )
    })
}

pub fn decompose_vchain(
    pauli: GateKind,
    controls: &[QubitRef],
    target: QubitRef,
    aux: &[QubitRef],
    state: AuxState,
) -> Result<Vec<Instruction>, DecompError> {
    pauli_only("VChain", pauli)?;
    run(Family::VChain, |em| {
        vchain::vchain(em, pauli, controls, target, aux, state)
    })
}

pub fn decompose_single_aux(
    pauli: GateKind,
    controls: &[QubitRef],
    target: QubitRef,
    aux: &[QubitRef],
    state: AuxState,
) -> Result<Vec<Instruction>, DecompError> {
    pauli_only("SingleAux", pauli)?;
    run(Family::SingleAux, |em| {
        vchain::single_aux(em, pauli, controls, target, aux, state)
    })
}

pub fn decompose_su2(
    gate: GateKind,
    controls: &[QubitRef],
    target: QubitRef,
) -> Result<Vec<Instruction>, DecompError> {
    run(Family::SU2, |em| {
        su2::su2(em, &gate.matrix(), controls, target)
    })
}

pub fn decompose_su2_rewrite(
    gate: GateKind,
    global_phase: f64,
    controls: &[QubitRef],
    target: QubitRef,
    aux: &[QubitRef],
) -> Result<Vec<Instruction>, DecompError> {
    let &[a] = aux else {
        return Err(DecompError::AuxCount {
            family: "SU2Rewrite",
            needed: 1,
            got: aux.len(),
        });
    };
    if !matches!(gate.class(), GateClass::Phase | GateClass::Hadamard) {
        return Err(DecompError::Unsupported {
            family: "SU2Rewrite",
            what: gate.to_string(),
        });
    }
    run(Family::SU2Rewrite, |em| {
        su2::su2_rewrite(em, gate, global_phase, controls, target, a)
    })
}

pub fn decompose_linear_depth(
    gate: GateKind,
    global_phase: f64,
    controls: &[QubitRef],
    target: QubitRef,
) -> Result<Vec<Instruction>, DecompError> {
    if controls.len() == 1 {
        return Ok(decompose_cu2(gate, global_phase, controls[0], target));
    }
    run(Family::LinearDepth, |em| {
        su2::linear_depth(em, &phased_matrix(&gate, global_phase), controls, target)
    })
}

/// `Phase(φ)` on the last control, controlled by the others, or `None` when nothing is needed.
pub fn phase_correction(controls: &[QubitRef], phi: f64) -> Option<Instruction> {
    let (&last, rest) = controls.split_last()?;
    if phi == 0.0 {
        return None;
    }
    Some(Instruction::controlled(GateKind::Phase(phi), rest, last))
}

/// Emits `instr` with the given choice on the supplied auxiliary lines.
pub fn expand(
    instr: &Instruction,
    choice: &DecompChoice,
    aux: &[QubitRef],
) -> Result<Vec<Instruction>, DecompError> {
    let (g, gp, c, t) = (
        instr.gate,
        instr.global_phase,
        instr.controls.as_slice(),
        instr.target,
    );
    if aux.len() != choice.aux_count {
        return Err(DecompError::AuxCount {
            family: choice.family.name(),
            needed: choice.aux_count,
            got: aux.len(),
        });
    }
    match choice.family {
        Family::CU2 => match c {
            [one] => Ok(decompose_cu2(g, gp, *one, t)),
            _ => Err(DecompError::Unsupported {
                family: "CU2",
                what: format!("{} controls", c.len()),
            }),
        },
        Family::SpecificPauli => decompose_specific_pauli(g, c, t),
        Family::ApproxToffoli => match c {
            [a, b] => Ok(approx_toffoli(*a, *b, t)),
            _ => Err(DecompError::Unsupported {
                family: "ApproxToffoli",
                what: format!("{} controls", c.len()),
            }),
        },
        Family::Network => decompose_network(g, gp, c, t, aux),
        Family::VChain => decompose_vchain(g, c, t, aux, choice.aux_state),
        Family::SingleAux => decompose_single_aux(g, c, t, aux, choice.aux_state),
        Family::SU2 => decompose_su2(g, c, t),
        Family::SU2Rewrite => decompose_su2_rewrite(g, gp, c, t, aux),
        Family::LinearDepth => decompose_linear_depth(g, gp, c, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{standard_lines, verify_decomposition, AuxInit};
    use std::f64::consts::PI;

    #[test]
    fn cu2_of_x_is_one_cnot() {
        let out = decompose_cu2(GateKind::PauliX, 0.0, QubitRef::Main(0), QubitRef::Main(1));
        assert_eq!(out.len(), 1);
        assert!(out[0].is_cnot());
        assert_eq!(out[0].tag, Some(Family::CU2));
    }

    #[test]
    fn cu2_of_general_gate_has_two_cnots() {
        let out = decompose_cu2(
            GateKind::Hadamard,
            0.3,
            QubitRef::Main(0),
            QubitRef::Main(1),
        );
        assert_eq!(out.iter().filter(|i| i.is_cnot()).count(), 2);
        assert!(
            verify_decomposition(GateKind::Hadamard, 0.3, 1, &out, 0, AuxInit::Clean, 1e-12)
                .unwrap()
                .equal
        );
    }

    #[test]
    fn phase_correction_cases() {
        let c = [QubitRef::Main(0), QubitRef::Main(1)];
        let i = phase_correction(&c, PI / 4.0).unwrap();
        assert_eq!(i.gate, GateKind::Phase(PI / 4.0));
        assert_eq!(i.target, c[1]);
        assert_eq!(i.controls.as_slice(), &c[..1]);
        assert!(phase_correction(&c, 0.0).is_none());
        assert!(phase_correction(&[], 1.0).is_none());
    }

    #[test]
    fn vchain_rejects_non_pauli() {
        let (c, t, a) = standard_lines(4, 2);
        assert!(decompose_vchain(GateKind::Hadamard, &c, t, &a, AuxState::Clean).is_err());
    }

    #[test]
    fn expand_checks_aux_count() {
        let (c, t, _) = standard_lines(4, 0);
        let instr = Instruction::controlled(GateKind::PauliX, &c, t);
        let choice = DecompChoice::with_aux(Family::VChain, 2, AuxState::Clean);
        assert!(matches!(
            expand(&instr, &choice, &[]),
            Err(DecompError::AuxCount { .. })
        ));
    }

    #[test]
    fn every_output_is_tagged_and_closed() {
        let (c, t, a) = standard_lines(5, 4);
        let instr = Instruction::controlled(GateKind::RotY(0.3), &c, t);
        let out = expand(
            &instr,
            &DecompChoice::with_aux(Family::Network, 4, AuxState::Clean),
            &a,
        )
        .unwrap();
        assert!(out.iter().all(|i| i.tag == Some(Family::Network)));
        assert!(out.iter().all(|i| i.controls.is_empty() || i.is_cnot()));
    }
}
