//! High-level circuit construction with control scopes, conjugation and adjoint blocks.

use crate::circuit::{Circuit, Instruction, QpuSpec, QubitRef};
use crate::error::BuildError;
use crate::gate::GateKind;

pub type BuildResult<T = ()> = Result<T, BuildError>;

/// A circuit under construction.
///
/// Instructions issued inside `adjoint` or the conjugation half of `with_around` are captured
/// first and committed once the block closes.
#[derive(Debug)]
pub struct Process {
    circuit: Circuit,
    controls: Vec<QubitRef>,
    captures: Vec<Vec<Instruction>>,
}

impl Process {
    pub fn new(qpu: QpuSpec) -> Self {
        Process {
            circuit: Circuit::new(qpu),
            controls: Vec::new(),
            captures: Vec::new(),
        }
    }

    pub fn qpu(&self) -> QpuSpec {
        self.circuit.qpu
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn into_circuit(self) -> Circuit {
        self.circuit
    }

    pub fn allocate(&mut self, n: usize) -> BuildResult<Vec<QubitRef>> {
        let total = self.circuit.qpu.total;
        let used = self.circuit.allocated;
        if used + n > total {
            return Err(BuildError::CapacityExceeded {
                requested: n,
                available: total - used,
                total,
            });
        }
        self.circuit.allocated = used + n;
        Ok((used..used + n).map(QubitRef::Main).collect())
    }

    fn check_allocated(&self, q: QubitRef) -> BuildResult {
        match q {
            QubitRef::Main(i) if i < self.circuit.allocated => Ok(()),
            _ => Err(BuildError::Unallocated(q)),
        }
    }

    pub fn apply(&mut self, gate: GateKind, target: QubitRef) -> BuildResult {
        self.apply_with_phase(gate, target, 0.0)
    }

    /// Applies `e^{i phase} * gate` under the active control scope.
    pub fn apply_with_phase(
        &mut self,
        gate: GateKind,
        target: QubitRef,
        phase: f64,
    ) -> BuildResult {
        self.check_allocated(target)?;
        if self.controls.contains(&target) {
            return Err(BuildError::TargetInControlScope(target));
        }
        let instr = Instruction::controlled(gate, &self.controls, target).with_phase(phase);
        self.emit(instr);
        Ok(())
    }

    fn emit(&mut self, instr: Instruction) {
        match self.captures.last_mut() {
            Some(buf) => buf.push(instr),
            None => self
                .circuit
                .push(instr)
                .expect("builder only emits validated instructions"),
        }
    }

    pub fn with_control<F>(&mut self, controls: &[QubitRef], body: F) -> BuildResult
    where
        F: FnOnce(&mut Process) -> BuildResult,
    {
        for (k, &c) in controls.iter().enumerate() {
            self.check_allocated(c)?;
            if self.controls.contains(&c) || controls[..k].contains(&c) {
                return Err(BuildError::DuplicateControl(c));
            }
        }
        let depth = self.controls.len();
        self.controls.extend_from_slice(controls);
        let r = body(self);
        self.controls.truncate(depth);
        r
    }

    fn capture<F>(&mut self, body: F) -> BuildResult<Vec<Instruction>>
    where
        F: FnOnce(&mut Process) -> BuildResult,
    {
        self.captures.push(Vec::new());
        let r = body(self);
        let buf = self.captures.pop().unwrap_or_default();
        r.map(|_| buf)
    }

    /// Emits `conj`, `body`, then the inverse of `conj`. The conjugation ignores the active control scope.
    pub fn with_around<C, F>(&mut self, conj: C, body: F) -> BuildResult
    where
        C: FnOnce(&mut Process) -> BuildResult,
        F: FnOnce(&mut Process) -> BuildResult,
    {
        let saved = std::mem::take(&mut self.controls);
        let conj_ops = self.capture(conj);
        self.controls = saved;
        let conj_ops = conj_ops?;
        if let Some(i) = conj_ops.iter().find(|i| self.controls.contains(&i.target)) {
            return Err(BuildError::TargetInControlScope(i.target));
        }
        for i in &conj_ops {
            self.emit(i.clone());
        }
        body(self)?;
        for i in conj_ops.iter().rev() {
            self.emit(i.inverse());
        }
        Ok(())
    }

    /// Emits the inverse of everything `body` issues, in reverse order.
    pub fn adjoint<F>(&mut self, body: F) -> BuildResult
    where
        F: FnOnce(&mut Process) -> BuildResult,
    {
        let ops = self.capture(body)?;
        for i in ops.iter().rev() {
            self.emit(i.inverse());
        }
        Ok(())
    }

    pub fn measure(&mut self, qubits: &[QubitRef]) -> BuildResult {
        if !self.captures.is_empty() {
            return Err(BuildError::NonInvertibleBody);
        }
        for &q in qubits {
            self.check_allocated(q)?;
            self.circuit
                .measure(q)
                .expect("allocated qubits are in range");
        }
        Ok(())
    }
}
