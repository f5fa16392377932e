use thiserror::Error;

/// Failures shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operand shapes disagree (matrix not square, point of the wrong length, ...).
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An enumeration or scan would exceed its configured guard.
    #[error("resource guard exceeded: {0}")]
    Resource(String),
    /// Empty input where at least one element is required.
    #[error("empty input: {0}")]
    EmptyInput(String),
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}
