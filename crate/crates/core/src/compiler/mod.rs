//! Program-order compilation: select, expand and allocate each multi-controlled instruction.

mod alloc;
pub mod fuse;
mod select;

use serde::Serialize;

pub use alloc::{AuxGroup, Placement};
pub use select::{select_decomposition, Policy, SelectionContext};

use crate::circuit::{
    Circuit, Family, GateStats, Instruction, InteractionLog, InteractionOrder, QpuSpec, QubitRef,
    QubitState,
};
use crate::decomp::{expand, phase_correction, AuxState, DecompChoice};
use crate::error::CompileError;
use crate::gate::{GateClass, GateKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompileOptions {
    pub policy: Policy,
    pub order: InteractionOrder,
    /// Run the diagonal fusion pre-pass.
    pub fuse: bool,
    /// Keep interaction snapshots in placements (for invariant checks).
    pub trace: bool,
    /// Keep the compiled instruction list; off for count-only runs.
    pub keep_instructions: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            policy: Policy::Auto,
            order: InteractionOrder::FirstContact,
            fuse: true,
            trace: false,
            keep_instructions: true,
        }
    }
}

impl CompileOptions {
    pub fn with_policy(policy: Policy) -> Self {
        CompileOptions {
            policy,
            ..Self::default()
        }
    }
}

/// One decomposition performed during compilation.
#[derive(Debug, Clone, Serialize)]
pub struct ChoiceRecord {
    pub source: usize,
    pub gate: String,
    pub n_controls: usize,
    pub choice: DecompChoice,
    pub interaction_group: Vec<usize>,
    pub placements: Vec<Placement>,
    pub cnots: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompileReport {
    pub qpu: usize,
    pub policy: Policy,
    pub choices: Vec<ChoiceRecord>,
    pub stats: GateStats,
}

impl CompileReport {
    pub fn families(&self) -> Vec<Family> {
        self.stats.per_family.keys().copied().collect()
    }
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub circuit: Circuit,
    pub report: CompileReport,
}

struct Compiler<'a> {
    qpu: QpuSpec,
    opts: CompileOptions,
    clean: &'a [bool],
    allocated: usize,
    log: InteractionLog,
    out: Vec<Instruction>,
    stats: GateStats,
    choices: Vec<ChoiceRecord>,
    next_group: usize,
}

impl Compiler<'_> {
    fn emit(&mut self, mut instr: Instruction) -> Result<(), CompileError> {
        if instr.controls.is_empty() {
            instr.global_phase = 0.0;
        }
        self.stats.observe(&instr)?;
        self.log.observe(&instr);
        if self.opts.keep_instructions {
            self.out.push(instr);
        }
        Ok(())
    }

    fn clean_free(&self, instr: &Instruction) -> usize {
        (0..self.clean.len())
            .filter(|&i| self.clean[i] && !instr.qubits().any(|q| q == QubitRef::Main(i)))
            .count()
    }

    fn instruction(&mut self, source: usize, mut instr: Instruction) -> Result<(), CompileError> {
        if instr.controls.is_empty() {
            if !instr.gate.is_zero_angle() {
                self.emit(instr)?;
            }
            return Ok(());
        }
        let class = instr.gate.class();
        let absorbs = class == GateClass::Phase && !instr.gate.is_zero_angle();
        if instr.global_phase != 0.0 && !absorbs {
            if let Some(fix) = phase_correction(&instr.controls, instr.global_phase) {
                self.instruction(source, fix)?;
            }
            instr.global_phase = 0.0;
        }
        if instr.gate.is_zero_angle() {
            return Ok(());
        }
        if instr.controls.len() == 1 && instr.gate == GateKind::PauliX && instr.global_phase == 0.0
        {
            return self.emit(instr);
        }

        let ctx = SelectionContext {
            qpu_total: self.qpu.total,
            allocated: self.allocated,
            clean_free: self.clean_free(&instr),
            gate_class: class,
            n_controls: instr.controls.len(),
            policy: self.opts.policy,
        };
        let choice = select_decomposition(&ctx);
        let group_id = self.next_group;
        self.next_group += 1;
        let aux: Vec<QubitRef> = (0..choice.aux_count)
            .map(|index| QubitRef::Aux {
                group: group_id,
                index,
            })
            .collect();
        let mut seq = expand(&instr, &choice, &aux)?;

        let interaction_group: Vec<QubitRef> = if choice.aux_state == AuxState::Dirty {
            instr.qubits().collect()
        } else {
            Vec::new()
        };
        let mut placements = Vec::new();
        if !aux.is_empty() {
            for i in &seq {
                self.log.observe(i);
            }
            let group = AuxGroup {
                group_id,
                aux: aux.clone(),
                interaction_group: interaction_group.clone(),
                required_state: choice.aux_state,
            };
            let mut allocator = alloc::Allocator {
                log: &mut self.log,
                clean: self.clean,
                trace: self.opts.trace,
            };
            placements = allocator.allocate(&group)?;
            for (a, p) in aux.iter().zip(&placements) {
                for i in seq.iter_mut() {
                    i.remap(*a, QubitRef::Main(p.host));
                }
            }
        }
        let before = self.stats.cnot_total;
        for i in seq {
            if aux.is_empty() {
                self.emit(i)?;
            } else {
                // Interactions were logged before allocation and moved onto the hosts.
                self.stats.observe(&i)?;
                if self.opts.keep_instructions {
                    self.out.push(i);
                }
            }
        }
        self.choices.push(ChoiceRecord {
            source,
            gate: instr.gate.to_string(),
            n_controls: instr.controls.len(),
            choice,
            interaction_group: interaction_group
                .iter()
                .filter_map(|q| q.main_index())
                .collect(),
            placements,
            cnots: self.stats.cnot_total - before,
        });
        Ok(())
    }
}

/// Compiles `circuit` for `qpu`. The input's untouched qubits form the clean pool.
pub fn compile_with(
    circuit: &Circuit,
    qpu: QpuSpec,
    opts: CompileOptions,
) -> Result<Compiled, CompileError> {
    let width = circuit.width();
    if width > qpu.total {
        return Err(CompileError::Capacity {
            needed: width,
            total: qpu.total,
        });
    }
    let clean: Vec<bool> = (0..qpu.total)
        .map(|i| {
            circuit
                .qubit_state
                .get(i)
                .is_none_or(|s| *s == QubitState::Clean)
        })
        .collect();
    let (instrs, sources) = if opts.fuse {
        fuse::fuse_diagonals(&circuit.instructions)
    } else {
        (
            circuit.instructions.clone(),
            (0..circuit.instructions.len()).collect(),
        )
    };
    let mut c = Compiler {
        qpu,
        opts,
        clean: &clean,
        allocated: width,
        log: InteractionLog::new(opts.order),
        out: Vec::new(),
        stats: GateStats::default(),
        choices: Vec::new(),
        next_group: 0,
    };
    for (instr, src) in instrs.into_iter().zip(sources) {
        c.instruction(src, instr)?;
    }
    let mut qubit_state: Vec<QubitState> = clean
        .iter()
        .map(|&b| {
            if b {
                QubitState::Clean
            } else {
                QubitState::Dirty
            }
        })
        .collect();
    qubit_state.resize(qpu.total, QubitState::Clean);
    let out = Circuit {
        instructions: c.out,
        measured: circuit.measured.clone(),
        qpu,
        qubit_state,
        interactions: c.log,
        allocated: width,
    };
    Ok(Compiled {
        circuit: out,
        report: CompileReport {
            qpu: qpu.total,
            policy: opts.policy,
            choices: c.choices,
            stats: c.stats,
        },
    })
}

pub fn compile(circuit: &Circuit, qpu: QpuSpec, policy: Policy) -> Result<Compiled, CompileError> {
    compile_with(circuit, qpu, CompileOptions::with_policy(policy))
}
