use thiserror::Error;

/// Errors surfaced by the library. Domain violations and configured limits
/// are kept separate so the CLI can map them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("limit exceeded: {0}")]
    Limit(String),

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("did not converge: {0}")]
    NoConvergence(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn limit(msg: impl Into<String>) -> Self {
        Error::Limit(msg.into())
    }

    pub fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
