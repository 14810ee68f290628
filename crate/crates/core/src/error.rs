use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{what} supports at most {max} qubits, got {requested}")]
    TooManyQubits {
        what: &'static str,
        max: usize,
        requested: usize,
    },

    #[error("qubit count must be positive")]
    ZeroQubits,

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("trace deviates from one (trace = {trace})")]
    BadTrace { trace: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not unitary (max deviation {deviation})")]
    NotUnitary { deviation: f64 },

    #[error("Kraus operators are not trace preserving (max deviation {deviation})")]
    NotTracePreserving { deviation: f64 },

    #[error("parameter {name} = {value} out of range")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("invalid Pauli label {0:?}")]
    InvalidPauliLabel(alloc::string::String),

    #[error("unknown protocol {0:?}")]
    UnknownProtocol(alloc::string::String),

    #[error("characteristic function vanishes for this setting")]
    ZeroCharacteristic,

    #[error("relevance distribution is empty")]
    EmptyDistribution,

    #[error("shot probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("internal self-check failed: {0}")]
    SelfCheck(&'static str),
}
