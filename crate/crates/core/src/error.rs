use thiserror::Error;

/// Errors raised by the optimisation primitives and the experiment harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A mirror-map argument left the range where `exp` is representable.
    #[error("numeric range exceeded: {what} = {value}")]
    NumericRange { what: &'static str, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
