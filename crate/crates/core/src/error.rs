use thiserror::Error;

/// Errors raised by the measure, kernel and trajectory operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (unknown label,
    /// mismatched spaces, out-of-range depth).
    #[error("domain error: {0}")]
    Domain(String),
    /// A stated hypothesis of the operation does not hold for the input.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Something that the preconditions guarantee did not happen.
    #[error("invariant violation: {0}")]
    Invariant(String),
    /// A model file could not be read or does not describe a valid model.
    #[error("malformed model: {0}")]
    Model(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
