use thiserror::Error;

use crate::qsim::GateKind;

/// Errors returned by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("qubit index {0} appears more than once in a gate")]
    RepeatedQubit(usize),
    #[error("gate {kind} takes {expected} qubits, got {got}")]
    Arity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("subsystem mask {mask:#b} is empty or exceeds {n_qubits} qubits")]
    InvalidSubsystem { mask: u64, n_qubits: usize },
    #[error("vector norm {0} is not 1")]
    NotNormalized(f64),
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace {0} is not 1")]
    BadTrace(f64),
    #[error("eigenvalue {0:e} is below the positivity tolerance")]
    NotPositive(f64),
    #[error("gate {0} has no decomposition rule")]
    UnsupportedDecomposition(GateKind),
    #[error("entropy vector has no entry for mask {0:#b}")]
    MissingEntry(u64),
    #[error("parties overlap or are empty")]
    InvalidParties,
    #[error("alpha = 1 is not supported")]
    AlphaOne,
    #[error("{0}")]
    InvalidConfig(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cut side {0:#b} is empty or contains every vertex")]
    TrivialCut(u64),
    #[error("linear system is singular")]
    Singular,
    #[error("zero variance, correlation undefined")]
    ZeroVariance,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
