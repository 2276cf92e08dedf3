use thiserror::Error;

/// Failure modes shared by every stage of the pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-range input (non-finite entries, size or degree mismatch).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An operation was called on data that violates its documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The computation ran but a numerical check did not hold.
    #[error("numerical failure: {message} (residual {residual:e})")]
    NumericalFailure { message: String, residual: f64 },
    /// The certificate search ran out of iterations.
    #[error("certificate search failed after {iterations} iterations (residual {residual:e})")]
    SearchFailure {
        iterations: usize,
        residual: f64,
        trace: Vec<f64>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn numerical<T>(msg: impl Into<String>, residual: f64) -> Result<T> {
    Err(Error::NumericalFailure {
        message: msg.into(),
        residual,
    })
}
