//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by construction, planning, and verification code.
#[derive(Debug, Error)]
pub enum Error {
    /// An index was outside the valid range of a matrix or oracle.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// A parameter violated a precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A search or plan exceeded its hard capacity cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Matrix dimensions were incompatible.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Input data was not Hermitian.
    #[error("not Hermitian: {0}")]
    Hermiticity(String),

    /// A row held more nonzeros than the declared sparsity bound.
    #[error("sparsity violation: {0}")]
    Sparsity(String),

    /// A file could not be parsed as the expected JSON schema.
    #[error("malformed JSON: {0}")]
    MalformedJson(String),

    /// Underlying I/O failure.
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    /// A numeric routine failed or left its certified tolerance.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A verification suite found a violated invariant.
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Numeric(format!("linear algebra backend: {e}"))
    }
}
