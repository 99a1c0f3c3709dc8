use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),

    #[error("qubit index {index} out of range for a {num_qubits}-qubit system")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("empty qubit set")]
    EmptyQubitSet,

    #[error("{num_qubits} qubits exceeds the dense-simulation limit of {max}")]
    TooManyQubits { num_qubits: usize, max: usize },

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("measurement basis is not orthonormal (max Gram deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("measurement basis has {got} vectors, a complete basis needs {dim}")]
    IncompleteBasis { got: usize, dim: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("construction check failed: {0}")]
    Construction(String),

    #[error("negativity profile is not monotone near gamma = {gamma} (drop {drop:e})")]
    NonMonotone { gamma: f64, drop: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
