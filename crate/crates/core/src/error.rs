use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A cutoff exceeds what a precomputed table covers.
    #[error("range error: {requested} exceeds table limit {limit}")]
    Range { requested: u64, limit: u64 },
    /// A configured size or memory cap would be exceeded.
    #[error("resource error: {0}")]
    Resource(String),
    /// The requested accuracy cannot be met within the term cap.
    #[error("precision error: {0}")]
    Precision(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("format error: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
