use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("order must be nonnegative, got {0}")]
    NegativeOrder(String),

    #[error("order out of range: {0}")]
    OrderOutOfRange(String),

    #[error("not representable in exact rational arithmetic: {0}")]
    ExactModeUnsupported(String),

    #[error("unsupported power: {0}")]
    UnsupportedPower(String),

    #[error("weight table too short: need {needed} values, have {have}")]
    WeightTooShort { needed: usize, have: usize },

    #[error("orbit horizon too short: need {needed}, have {have}")]
    HorizonTooShort { needed: usize, have: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("table[0] must be the identity matrix")]
    NotIdentityAtZero,

    #[error("lambda must be nonzero")]
    ZeroLambda,

    #[error("parameters must be distinct")]
    EqualParameters,

    #[error("transform point must be nonzero")]
    ZeroPoint,

    #[error("series is not summable: {0}")]
    NotSummable(String),

    #[error("truncated series does not converge: {0}")]
    NotConvergent(String),

    #[error("dimension too small: need at least {needed}, got {got}")]
    DimensionTooSmall { needed: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("weight must be strictly positive, offending index {0}")]
    NonpositiveWeight(usize),

    #[error("computation exceeds resource limit: {0}")]
    ResourceLimit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
