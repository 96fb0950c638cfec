use thiserror::Error;

/// Failure modes shared by every module.
///
/// The variants line up with the CLI exit codes: `Parse` is a usage error,
/// `Domain` a violated precondition, `Invariant` a failed verification and
/// `Resource`/`Inconclusive` a cap that the caller may raise.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("no eventual period found in a window of {window} terms; retry with a larger window")]
    Inconclusive { window: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn invariant<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invariant(msg.into()))
}
