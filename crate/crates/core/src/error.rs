use thiserror::Error;

/// Crate-wide error type. Every fallible public operation returns one of
/// these variants rather than panicking; panics are reserved for internal
/// invariant violations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("gate targets must be distinct")]
    DuplicateTargets,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state norm is {norm}; amplitudes must be normalized")]
    NotNormalized { norm: f64 },

    #[error("diagonal gate entry has modulus {modulus}; entries must lie on the unit circle")]
    NonUnitaryDiagonal { modulus: f64 },

    #[error("shot count must be positive")]
    ZeroShots,

    #[error("cannot encode a field with zero norm")]
    ZeroField,

    #[error("register must contain at least one qubit")]
    EmptyRegister,

    #[error("operator is not Hermitian")]
    NotHermitian,

    #[error("topology does not connect the qubits used by the circuit")]
    DisconnectedTopology,

    #[error("gate {0} cannot be routed on the given topology")]
    Unroutable(String),

    #[error("no result recorded for basis {0}")]
    MissingBasis(String),

    #[error("string {0} is not covered by the measurement plan")]
    UncoveredString(String),

    #[error("field has zero variance; correlation is undefined")]
    ZeroVariance,

    #[error("unknown difference scheme {0:?} (expected \"periodic-central\" or \"one-sided-at-boundary\")")]
    UnknownScheme(String),

    #[error("unknown flow {0:?} (expected \"diverging\" or \"vortex\")")]
    UnknownFlow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
