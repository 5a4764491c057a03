use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A pointwise formula was evaluated outside its domain (r ≤ 0, τ ≤ 0, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A requested time or spacetime region is not covered by the record.
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid bracket: {0}")]
    InvalidBracket(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
