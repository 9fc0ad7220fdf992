use thiserror::Error;

/// Errors raised by the computations in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The caller supplied an argument outside the operation's domain.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// The requested representation family or dimension is not constructible.
    #[error("unsupported: {0}")]
    Capability(String),
    /// Two independently computed quantities disagree.
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
