use thiserror::Error;

/// Errors raised by the library. Every variant is a domain error; usage
/// problems are the CLI's business.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configurations have different distance matrices")]
    MatricesDiffer,
    #[error("distance matrix is not realizable by points on the circle")]
    NotRealizable,
    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid cluster structure: {0}")]
    InvalidClusterStructure(String),
    #[error("invalid barycentric point: {0}")]
    InvalidBarycentric(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("configuration is not normalized (first angle must be 0)")]
    NotNormalized,
    #[error("index set is empty")]
    EmptyIndexSet,
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("size limit exceeded: {what} is {size}, limit {limit}")]
    SizeLimitExceeded {
        what: String,
        size: usize,
        limit: usize,
    },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive semidefinite (min eigenvalue {0})")]
    NotPsd(f64),
    #[error("modular ranks disagree: {0}")]
    RankDisagreement(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
