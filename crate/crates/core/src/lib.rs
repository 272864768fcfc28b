//! Multi-controlled gate decomposition with automatic auxiliary qubit allocation.

pub mod bench;
pub mod builder;
pub mod circuit;
pub mod compiler;
pub mod decomp;
pub mod error;
pub mod format;
pub mod gate;
pub mod sim;

pub use builder::Process;
pub use circuit::{
    Circuit, Family, GateStats, Instruction, InteractionOrder, QpuSpec, QubitRef, QubitState,
};
pub use error::{
    BenchError, BuildError, CircuitError, CompileError, DecompError, FormatError, SimError,
};
pub use gate::GateKind;
