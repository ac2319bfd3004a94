//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Partial sums overflowed.
    #[error("range error: {0}")]
    Range(String),
    /// An iteration or series did not converge under its cap.
    #[error("no convergence: {0}")]
    NonConvergence(String),
    /// Malformed request (dimension mismatch, bad parameters, parse failures).
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn nonconv(msg: impl Into<String>) -> Self {
        Error::NonConvergence(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
