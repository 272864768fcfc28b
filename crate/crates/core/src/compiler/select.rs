//! Cheapest-feasible decomposition selection.

use serde::{Deserialize, Serialize};

use crate::circuit::Family;
use crate::decomp::{AuxState, DecompChoice};
use crate::gate::GateClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    #[default]
    Auto,
    ForceNoAux,
}

impl Policy {
    pub fn name(&self) -> &'static str {
        match self {
            Policy::Auto => "auto",
            Policy::ForceNoAux => "force-no-aux",
        }
    }

    pub fn parse(s: &str) -> Option<Policy> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "auto" => Some(Policy::Auto),
            "force-no-aux" | "forcenoaux" | "no-aux" => Some(Policy::ForceNoAux),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionContext {
    pub qpu_total: usize,
    /// Main qubits in use by the program.
    pub allocated: usize,
    /// Clean qubits not touched by the gate being decomposed.
    pub clean_free: usize,
    pub gate_class: GateClass,
    pub n_controls: usize,
    pub policy: Policy,
}

impl SelectionContext {
    fn clean_ok(&self, k: usize) -> bool {
        self.policy == Policy::Auto && self.clean_free >= k
    }

    fn dirty_ok(&self, k: usize) -> bool {
        self.policy == Policy::Auto && k + self.n_controls < self.qpu_total
    }
}

/// First feasible entry of the class-specific candidate list.
pub fn select_decomposition(ctx: &SelectionContext) -> DecompChoice {
    let n = ctx.n_controls;
    if n <= 1 {
        return DecompChoice::no_aux(Family::CU2);
    }
    match ctx.gate_class {
        GateClass::Pauli => {
            if n <= 3 {
                DecompChoice::no_aux(Family::SpecificPauli)
            } else if ctx.clean_ok(n - 2) {
                DecompChoice::with_aux(Family::VChain, n - 2, AuxState::Clean)
            } else if ctx.dirty_ok(n - 2) {
                DecompChoice::with_aux(Family::VChain, n - 2, AuxState::Dirty)
            } else if ctx.clean_ok(1) {
                DecompChoice::with_aux(Family::SingleAux, 1, AuxState::Clean)
            } else if ctx.dirty_ok(1) {
                DecompChoice::with_aux(Family::SingleAux, 1, AuxState::Dirty)
            } else {
                DecompChoice::no_aux(Family::LinearDepth)
            }
        }
        GateClass::Rotation => {
            if ctx.clean_ok(n - 1) {
                DecompChoice::with_aux(Family::Network, n - 1, AuxState::Clean)
            } else {
                DecompChoice::no_aux(Family::SU2)
            }
        }
        GateClass::Phase | GateClass::Hadamard => {
            if ctx.clean_ok(n - 1) {
                DecompChoice::with_aux(Family::Network, n - 1, AuxState::Clean)
            } else if ctx.clean_ok(1) {
                DecompChoice::with_aux(Family::SU2Rewrite, 1, AuxState::Clean)
            } else {
                DecompChoice::no_aux(Family::LinearDepth)
            }
        }
    }
}
