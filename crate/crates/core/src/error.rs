use thiserror::Error;

use crate::circuit::QubitRef;

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("qubit index {index} outside QPU of {total} qubits")]
    OutOfRange { index: usize, total: usize },
    #[error("auxiliary reference {0} in a main-qubit circuit")]
    UnexpectedAux(QubitRef),
    #[error("target {0} also appears as a control")]
    TargetInControls(QubitRef),
    #[error("circuit is not fully compiled: {0}")]
    NotCompiled(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum BuildError {
    #[error("requested {requested} qubits but only {available} of {total} remain")]
    CapacityExceeded {
        requested: usize,
        available: usize,
        total: usize,
    },
    #[error("qubit {0} is not allocated")]
    Unallocated(QubitRef),
    #[error("target {0} is an active control")]
    TargetInControlScope(QubitRef),
    #[error("control {0} listed twice or already active")]
    DuplicateControl(QubitRef),
    #[error("measurement inside an adjoint or conjugation block")]
    NonInvertibleBody,
}

#[derive(Debug, Error, PartialEq)]
pub enum DecompError {
    #[error("matrix is not special unitary (det deviates by {0:e})")]
    NotSpecialUnitary(f64),
    #[error("{family} needs {needed} auxiliary qubits, got {got}")]
    AuxCount {
        family: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("{family} does not support {what}")]
    Unsupported { family: &'static str, what: String },
    #[error("auxiliary qubits must be clean for {0}")]
    AuxNotClean(&'static str),
}

#[derive(Debug, Error, PartialEq)]
pub enum CompileError {
    #[error("circuit uses {needed} qubits but the QPU has {total}")]
    Capacity { needed: usize, total: usize },
    #[error("no host available for {aux} (internal feasibility breach)")]
    AllocationImpossible { aux: QubitRef },
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("{0} qubits exceeds the simulator limit of {1}")]
    TooLarge(usize, usize),
    #[error("circuit contains a measurement")]
    ContainsMeasurement,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("qubit {0} is not in the simulated register")]
    UnknownQubit(QubitRef),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing header line")]
    MissingHeader,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error(
        "probability and phase lists must have equal power-of-two length >= 2 (got {0} and {1})"
    )]
    InvalidLengths(usize, usize),
    #[error("probabilities must be non-negative and not all zero")]
    InvalidProbabilities,
    #[error("instance of {n} qubits exceeds QPU of {total}")]
    TooWide { n: usize, total: usize },
    #[error("empty range {0}..{1}")]
    EmptyRange(usize, usize),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Compile(#[from] CompileError),
}
