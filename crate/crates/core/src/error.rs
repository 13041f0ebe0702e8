use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Cholesky pivot fell below the positive-definiteness threshold.
    #[error("matrix is not numerically positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("shape parameter must be positive and finite, got {0}")]
    InvalidShape(f64),

    #[error("nodes {first} and {second} are closer than the separation floor")]
    DuplicateNodes { first: usize, second: usize },

    #[error("evaluation set is empty")]
    EmptyEvaluationSet,

    #[error("data values are all zero")]
    AllZeroValues,

    #[error("no shape parameter in [{eps_min}, {eps_max}] gives a numerically positive definite kernel matrix")]
    NoAdmissibleShape { eps_min: f64, eps_max: f64 },

    #[error("invalid domain [{a}, {b}]")]
    InvalidDomain { a: f64, b: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("point {point:?} lies outside the target domain")]
    OutOfDomain { point: Vec<f64> },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown target `{0}`")]
    UnknownTarget(String),

    #[error("unknown kernel `{0}`")]
    UnknownKernel(String),

    #[error("eigenvalue iteration failed to converge")]
    EigenNoConvergence,
}
