use thiserror::Error;

/// Errors raised by the family operators, constructions, verifiers and search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("undefined for this input: {0}")]
    Undefined(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("search limit exceeded: {0}")]
    Limit(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
