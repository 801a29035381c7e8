use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Hilbert dimension {dim} exceeds the cap {cap} (set CLONELAB_MAX_DIM to raise it)")]
    DimensionCap { dim: usize, cap: usize },
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("normalization violated: {0}")]
    Normalization(String),
    #[error("tensor product of mixed operand kinds")]
    MixedKinds,
    #[error("linear constraint system is inconsistent (residual {0:e})")]
    Inconsistent(f64),
    #[error("optimizer failed: {0}")]
    Optimizer(String),
}

pub type Result<T> = std::result::Result<T, Error>;
