use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("expected {expected} target qubits, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("partial trace must discard a non-empty proper subset of the qubits")]
    InvalidDiscardSet,

    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(&'static str),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("controller {index} does not exist ({count} controllers)")]
    ControllerOutOfRange { index: usize, count: usize },

    #[error("no Pauli correction reproduces the input for outcome tuple {outcomes:?}")]
    NoPauliFrame { outcomes: Vec<usize> },
}
