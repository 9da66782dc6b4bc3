use thiserror::Error;

/// Errors raised by the lattice, cohomology and oracle routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),

    #[error("zero vector: {0}")]
    ZeroVector(&'static str),

    #[error("degenerate lattice: {0}")]
    Degenerate(String),

    #[error("class is not in the orthogonal complement: {0}")]
    NotInPerp(String),

    #[error("unsupported surface model: {0}")]
    UnsupportedModel(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("unsupported integral pattern: {0}")]
    UnsupportedPattern(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
