//! Auxiliary-qubit allocation onto main qubits.

use serde::Serialize;

use crate::circuit::{InteractionLog, QubitRef};
use crate::decomp::AuxState;
use crate::error::CompileError;

/// The auxiliary lines created for one decomposition.
#[derive(Debug, Clone)]
pub struct AuxGroup {
    pub group_id: usize,
    pub aux: Vec<QubitRef>,
    /// Controls and target of the decomposed gate; empty for clean groups.
    pub interaction_group: Vec<QubitRef>,
    pub required_state: AuxState,
}

/// How one auxiliary line was placed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Placement {
    pub aux: usize,
    pub host: usize,
    /// 1 when found through the interaction scan, 2 otherwise.
    pub phase: u8,
    #[serde(skip)]
    pub via: Option<QubitRef>,
    /// Interaction snapshots taken at selection time (only when tracing).
    #[serde(skip)]
    pub aux_partners: Vec<QubitRef>,
    #[serde(skip)]
    pub via_partners: Vec<QubitRef>,
}

pub(crate) struct Allocator<'a> {
    pub log: &'a mut InteractionLog,
    pub clean: &'a [bool],
    pub trace: bool,
}

impl Allocator<'_> {
    fn is_clean(&self, q: QubitRef) -> bool {
        q.main_index()
            .is_some_and(|i| self.clean.get(i).copied().unwrap_or(false))
    }

    /// Picks the host for `a` given the hosts `taken` so far.
    pub fn select_main(
        &self,
        a: QubitRef,
        group: &AuxGroup,
        taken: &[QubitRef],
    ) -> Option<Placement> {
        let dirty = !group.interaction_group.is_empty();
        let in_group = |q: &QubitRef| group.aux.contains(q) || taken.contains(q);
        let aux_partners = self.log.partners(a);
        for &i in &aux_partners {
            if group.aux.contains(&i) {
                continue;
            }
            let via_partners = self.log.partners(i);
            for &c in via_partners.iter().rev() {
                if c.is_aux() || in_group(&c) {
                    continue;
                }
                if (dirty && !group.interaction_group.contains(&c)) || self.is_clean(c) {
                    let (ap, vp) = if self.trace {
                        (aux_partners.clone(), via_partners)
                    } else {
                        (Vec::new(), Vec::new())
                    };
                    return Some(Placement {
                        aux: aux_index(a),
                        host: c.main_index()?,
                        phase: 1,
                        via: Some(i),
                        aux_partners: ap,
                        via_partners: vp,
                    });
                }
            }
        }
        let phase2 = |host: usize| Placement {
            aux: aux_index(a),
            host,
            phase: 2,
            via: None,
            aux_partners: Vec::new(),
            via_partners: Vec::new(),
        };
        if let Some(i) =
            (0..self.clean.len()).find(|&i| self.clean[i] && !in_group(&QubitRef::Main(i)))
        {
            return Some(phase2(i));
        }
        if !dirty {
            return None;
        }
        (0..self.clean.len())
            .find(|&i| {
                let q = QubitRef::Main(i);
                !group.interaction_group.contains(&q) && !taken.contains(&q)
            })
            .map(phase2)
    }

    /// Places every auxiliary of `group`; returns the placements in aux order.
    pub fn allocate(&mut self, group: &AuxGroup) -> Result<Vec<Placement>, CompileError> {
        let mut taken = Vec::with_capacity(group.aux.len());
        let mut placements = Vec::with_capacity(group.aux.len());
        for &a in &group.aux {
            let p = self
                .select_main(a, group, &taken)
                .ok_or(CompileError::AllocationImpossible { aux: a })?;
            let host = QubitRef::Main(p.host);
            self.log.merge(a, host);
            taken.push(host);
            placements.push(p);
        }
        Ok(placements)
    }
}

fn aux_index(a: QubitRef) -> usize {
    match a {
        QubitRef::Aux { index, .. } => index,
        QubitRef::Main(i) => i,
    }
}
