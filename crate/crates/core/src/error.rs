use thiserror::Error;

use crate::quil::SourceError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid state size: {0} qubits (allowed 1..={max})", max = crate::state::MAX_QUBITS)]
    InvalidSize(usize),

    #[error("basis label has {found} bits, state has {expected} qubits")]
    LabelLength { expected: usize, found: usize },

    #[error("qubit {qubit} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("qubit {qubit} appears in both {first} and {second}")]
    QubitOverlap {
        qubit: usize,
        first: &'static str,
        second: &'static str,
    },

    #[error("matrix of dimension {dim} cannot act on {qubits} qubits")]
    DimensionMismatch { dim: usize, qubits: usize },

    #[error("state sizes differ: {0} vs {1} qubits")]
    SizeMismatch(usize, usize),

    #[error("amplitudes are not a valid state: {0}")]
    InvalidAmplitudes(String),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("gate `{name}` {problem}")]
    BadParameter { name: String, problem: &'static str },

    #[error("gate `{name}` acts on {expected} qubits, got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("matrix dimension {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),

    #[error("matrix is not square")]
    NotSquare,

    #[error("matrix for `{name}` is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { name: String, deviation: f64 },

    #[error("gate name `{0}` collides with a built-in name")]
    ReservedName(String),

    #[error("invalid gate name `{0}`")]
    InvalidName(String),

    #[error("gate `{0}` is declared twice with different matrices")]
    GateCollision(String),

    #[error("tensor product of dimension {0} exceeds the dense limit")]
    TooLarge(usize),

    #[error("program is empty")]
    EmptyProgram,

    #[error("range {from}..{to} out of bounds for a program of length {len}")]
    RangeOutOfBounds { from: usize, to: usize, len: usize },

    #[error("invalid display options: {0}")]
    DisplayOptions(String),

    #[error("program records no measurements into classical registers")]
    NoMeasurements,

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("insufficient ancillas: {controls} controls need {needed}, got {found}")]
    InsufficientAncillas {
        controls: usize,
        needed: usize,
        found: usize,
    },

    #[error("bitstring length {found} does not match {expected}")]
    BitLength { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Source(#[from] SourceError),
}
