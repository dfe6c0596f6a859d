use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Matrix or vector shapes do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// The request is well-formed but outside what this implementation handles.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A structural invariant of an input object is violated.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A numerical procedure failed to converge or produced a non-finite value.
    #[error("numerical failure: {0}")]
    Numeric(String),
    /// A text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
