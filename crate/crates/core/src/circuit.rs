//! Circuit IR: qubit references, instructions, interaction tracking and CNOT statistics.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::CircuitError;
use crate::gate::GateKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QubitRef {
    Main(usize),
    Aux { group: usize, index: usize },
}

impl QubitRef {
    pub fn main_index(&self) -> Option<usize> {
        match *self {
            QubitRef::Main(i) => Some(i),
            QubitRef::Aux { .. } => None,
        }
    }

    pub fn is_aux(&self) -> bool {
        matches!(self, QubitRef::Aux { .. })
    }
}

impl fmt::Display for QubitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QubitRef::Main(i) => write!(f, "q{i}"),
            QubitRef::Aux { group, index } => write!(f, "a{group}.{index}"),
        }
    }
}

/// Decomposition family that produced an instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    CU2,
    SpecificPauli,
    ApproxToffoli,
    Network,
    VChain,
    SingleAux,
    SU2,
    SU2Rewrite,
    LinearDepth,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::CU2,
        Family::SpecificPauli,
        Family::ApproxToffoli,
        Family::Network,
        Family::VChain,
        Family::SingleAux,
        Family::SU2,
        Family::SU2Rewrite,
        Family::LinearDepth,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::CU2 => "CU2",
            Family::SpecificPauli => "SpecificPauli",
            Family::ApproxToffoli => "ApproxToffoli",
            Family::Network => "Network",
            Family::VChain => "VChain",
            Family::SingleAux => "SingleAux",
            Family::SU2 => "SU2",
            Family::SU2Rewrite => "SU2Rewrite",
            Family::LinearDepth => "LinearDepth",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.name() == s)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type Controls = SmallVec<[QubitRef; 2]>;

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub gate: GateKind,
    pub target: QubitRef,
    pub controls: Controls,
    pub global_phase: f64,
    pub tag: Option<Family>,
}

impl Instruction {
    pub fn new(gate: GateKind, target: QubitRef) -> Self {
        Instruction {
            gate,
            target,
            controls: SmallVec::new(),
            global_phase: 0.0,
            tag: None,
        }
    }

    pub fn controlled(gate: GateKind, controls: &[QubitRef], target: QubitRef) -> Self {
        Instruction {
            gate,
            target,
            controls: SmallVec::from_slice(controls),
            global_phase: 0.0,
            tag: None,
        }
    }

    pub fn cx(control: QubitRef, target: QubitRef) -> Self {
        Self::controlled(GateKind::PauliX, &[control], target)
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.global_phase = phase;
        self
    }

    pub fn with_tag(mut self, tag: Option<Family>) -> Self {
        self.tag = tag;
        self
    }

    pub fn inverse(&self) -> Self {
        Instruction {
            gate: self.gate.inverse(),
            target: self.target,
            controls: self.controls.clone(),
            global_phase: -self.global_phase,
            tag: self.tag,
        }
    }

    pub fn is_cnot(&self) -> bool {
        self.controls.len() == 1 && self.gate == GateKind::PauliX
    }

    pub fn qubits(&self) -> impl Iterator<Item = QubitRef> + '_ {
        self.controls
            .iter()
            .copied()
            .chain(std::iter::once(self.target))
    }

    pub fn remap(&mut self, from: QubitRef, to: QubitRef) {
        if self.target == from {
            self.target = to;
        }
        for c in self.controls.iter_mut() {
            if *c == from {
                *c = to;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QpuSpec {
    pub total: usize,
}

impl QpuSpec {
    pub fn new(total: usize) -> Self {
        assert!(total >= 1, "a QPU needs at least one qubit");
        QpuSpec { total }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitState {
    Clean,
    Dirty,
}

/// Partner ordering used by [`InteractionLog::partners`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InteractionOrder {
    #[default]
    FirstContact,
    LastContact,
}

#[derive(Debug, Clone, Copy)]
struct Contact {
    partner: QubitRef,
    first: u64,
    last: u64,
}

/// Two-qubit interaction history, one contact list per qubit.
#[derive(Debug, Clone, Default)]
pub struct InteractionLog {
    contacts: HashMap<QubitRef, Vec<Contact>>,
    clock: u64,
    order: InteractionOrder,
}

impl InteractionLog {
    pub fn new(order: InteractionOrder) -> Self {
        InteractionLog {
            contacts: HashMap::new(),
            clock: 0,
            order,
        }
    }

    pub fn order(&self) -> InteractionOrder {
        self.order
    }

    pub fn record(&mut self, a: QubitRef, b: QubitRef) {
        if a == b {
            return;
        }
        self.clock += 1;
        let t = self.clock;
        Self::touch(self.contacts.entry(a).or_default(), b, t, t);
        Self::touch(self.contacts.entry(b).or_default(), a, t, t);
    }

    /// Records the interaction if `instr` is a two-qubit instruction.
    pub fn observe(&mut self, instr: &Instruction) {
        if instr.controls.len() == 1 {
            self.record(instr.controls[0], instr.target);
        }
    }

    fn touch(list: &mut Vec<Contact>, partner: QubitRef, first: u64, last: u64) {
        match list.iter_mut().find(|c| c.partner == partner) {
            Some(c) => {
                c.first = c.first.min(first);
                c.last = c.last.max(last);
            }
            None => list.push(Contact {
                partner,
                first,
                last,
            }),
        }
    }

    /// Distinct partners of `q`, ordered per the configured policy.
    pub fn partners(&self, q: QubitRef) -> Vec<QubitRef> {
        let Some(list) = self.contacts.get(&q) else {
            return Vec::new();
        };
        let mut v: Vec<&Contact> = list.iter().collect();
        match self.order {
            InteractionOrder::FirstContact => v.sort_by_key(|c| c.first),
            InteractionOrder::LastContact => v.sort_by_key(|c| c.last),
        }
        v.into_iter().map(|c| c.partner).collect()
    }

    /// Folds every contact of `from` into `to` and forgets `from`.
    pub fn merge(&mut self, from: QubitRef, to: QubitRef) {
        let Some(moved) = self.contacts.remove(&from) else {
            return;
        };
        for c in moved {
            if c.partner == to {
                if let Some(l) = self.contacts.get_mut(&to) {
                    l.retain(|x| x.partner != from);
                }
                continue;
            }
            if let Some(l) = self.contacts.get_mut(&c.partner) {
                l.retain(|x| x.partner != from);
                Self::touch(l, to, c.first, c.last);
            }
            Self::touch(
                self.contacts.entry(to).or_default(),
                c.partner,
                c.first,
                c.last,
            );
        }
    }
}

/// Instruction list plus qubit bookkeeping.
#[derive(Debug, Clone)]
pub struct Circuit {
    pub instructions: Vec<Instruction>,
    pub measured: Vec<QubitRef>,
    pub qpu: QpuSpec,
    pub qubit_state: Vec<QubitState>,
    pub interactions: InteractionLog,
    pub allocated: usize,
}

impl Circuit {
    pub fn new(qpu: QpuSpec) -> Self {
        Circuit {
            instructions: Vec::new(),
            measured: Vec::new(),
            qpu,
            qubit_state: vec![QubitState::Clean; qpu.total],
            interactions: InteractionLog::default(),
            allocated: 0,
        }
    }

    /// Builds a circuit from raw instructions, deriving qubit states and interactions.
    pub fn from_instructions(
        qpu: QpuSpec,
        instructions: Vec<Instruction>,
    ) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(qpu);
        for instr in instructions {
            c.push(instr)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, instr: Instruction) -> Result<(), CircuitError> {
        for q in instr.qubits() {
            let i = q.main_index().ok_or(CircuitError::UnexpectedAux(q))?;
            if i >= self.qpu.total {
                return Err(CircuitError::OutOfRange {
                    index: i,
                    total: self.qpu.total,
                });
            }
            self.qubit_state[i] = QubitState::Dirty;
            self.allocated = self.allocated.max(i + 1);
        }
        if instr.controls.contains(&instr.target) {
            return Err(CircuitError::TargetInControls(instr.target));
        }
        self.interactions.observe(&instr);
        self.instructions.push(instr);
        Ok(())
    }

    pub fn measure(&mut self, q: QubitRef) -> Result<(), CircuitError> {
        let i = q.main_index().ok_or(CircuitError::UnexpectedAux(q))?;
        if i >= self.qpu.total {
            return Err(CircuitError::OutOfRange {
                index: i,
                total: self.qpu.total,
            });
        }
        self.qubit_state[i] = QubitState::Dirty;
        self.allocated = self.allocated.max(i + 1);
        if !self.measured.contains(&q) {
            self.measured.push(q);
        }
        Ok(())
    }

    pub fn interaction_qubits(&self, q: QubitRef) -> Vec<QubitRef> {
        self.interactions.partners(q)
    }

    pub fn clean_qubits(&self) -> Vec<QubitRef> {
        (0..self.qpu.total)
            .filter(|&i| self.qubit_state[i] == QubitState::Clean)
            .map(QubitRef::Main)
            .collect()
    }

    /// Number of lines the circuit touches (highest Main index + 1).
    pub fn width(&self) -> usize {
        self.allocated
    }

    pub fn gate_stats(&self) -> Result<GateStats, CircuitError> {
        let mut stats = GateStats::default();
        for instr in &self.instructions {
            stats.observe(instr)?;
        }
        Ok(stats)
    }
}

/// CNOT totals, overall and per decomposition family.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateStats {
    pub cnot_total: u64,
    pub per_family: BTreeMap<Family, u64>,
    pub single_qubit: u64,
}

impl GateStats {
    pub fn observe(&mut self, instr: &Instruction) -> Result<(), CircuitError> {
        if let Some(q) = instr.qubits().find(|q| q.is_aux()) {
            return Err(CircuitError::NotCompiled(format!("aux reference {q}")));
        }
        match instr.controls.len() {
            0 => self.single_qubit += 1,
            1 if instr.gate == GateKind::PauliX => {
                self.cnot_total += 1;
                if let Some(f) = instr.tag {
                    *self.per_family.entry(f).or_default() += 1;
                }
            }
            _ => {
                return Err(CircuitError::NotCompiled(format!(
                    "{} with {} controls",
                    instr.gate,
                    instr.controls.len()
                )))
            }
        }
        Ok(())
    }

    pub fn absorb(&mut self, other: &GateStats) {
        self.cnot_total += other.cnot_total;
        self.single_qubit += other.single_qubit;
        for (f, n) in &other.per_family {
            *self.per_family.entry(*f).or_default() += n;
        }
    }

    pub fn untagged(&self) -> u64 {
        self.cnot_total - self.per_family.values().sum::<u64>()
    }
}
