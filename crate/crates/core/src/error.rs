use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis index {index} out of range for a register of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("controlled-phase gate needs target < control, got k={k}, m={m}")]
    InvalidGate { k: usize, m: usize },

    #[error("register must have at least one qubit")]
    NoQubits,

    #[error("{num_qubits} qubits exceeds the supported maximum of {max}")]
    TooManyQubits { num_qubits: usize, max: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (|norm^2 - 1| = {0:e})")]
    NotNormalized(f64),

    #[error("state has non-finite amplitudes")]
    NonFinite,

    #[error("period {period} is invalid for a register of size {size}")]
    InvalidPeriod { period: u64, size: u64 },

    #[error("shift {shift} must be smaller than the period {period}")]
    InvalidShift { shift: u64, period: u64 },

    #[error("measurement needs a non-empty qubit subset")]
    EmptySubset,

    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("{0} is prime")]
    Prime(u64),

    #[error("invalid problem instance: {0}")]
    InvalidInstance(String),

    #[error("brute-force search supports at most {max} qubits, got {num_qubits}")]
    OracleTooLarge { num_qubits: usize, max: usize },

    #[error("malformed state file: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
