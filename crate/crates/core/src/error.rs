use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector must have dimension > 0")]
    EmptyVector,

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("vectors are orthogonal; the aligning phase is undefined")]
    Orthogonal,

    #[error("matrix is not Hermitian: |M[{i},{j}] - conj(M[{j},{i}])| = {deviation:e}")]
    NotHermitian { i: usize, j: usize, deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid model specification '{spec}': {reason}")]
    ModelSpec { spec: String, reason: String },

    #[error("operator produced a non-finite value")]
    NumericalBreakdown,

    #[error("power iteration produced a zero vector after {attempts} random restarts")]
    PowerIterationCollapsed { attempts: usize },

    #[error("weighted one-bit recovery requires ratio weights, which are only defined for the identity model (and additive intensity noise); got {0}")]
    WeightsUnsupported(String),

    #[error("weighted one-bit recovery requires ratio weights but the data carries none")]
    MissingWeights,

    #[error("insufficient measurements: {stages} blocks of at least {n} measurements need m >= {required}, got {got}")]
    InsufficientMeasurements {
        stages: usize,
        n: usize,
        required: usize,
        got: usize,
    },

    #[error("no candidates supplied")]
    NoCandidates,
}
