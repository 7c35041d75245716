use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter error: {0}")]
    Param(String),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("non-generic weight: {0}")]
    NonGeneric(String),
    #[error("singular character system: {0}")]
    Singular(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("cancelled")]
    Cancelled,
}

pub type Result<T> = std::result::Result<T, Error>;
