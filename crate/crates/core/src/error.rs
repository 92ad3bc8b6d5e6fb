use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Lengths or matrix dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("index {index} out of range for {len} modes")]
    Index { index: usize, len: usize },
    /// The requested Fock space exceeds the configured amplitude budget.
    #[error("resource limit: Fock dimension {dimension} (cutoff {cutoff}^{modes} modes) exceeds budget {budget}")]
    Resource {
        dimension: u128,
        cutoff: usize,
        modes: usize,
        budget: usize,
    },
    #[error("usage error: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn dimension(expected: usize, actual: usize) -> Self {
        Error::Dimension { expected, actual }
    }
}
