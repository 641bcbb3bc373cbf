use std::fmt;

/// Library error, tagged by how the caller should react.
///
/// `Usage` and `Domain` mean the request itself was malformed or outside the
/// defined domain of an operation; `Capacity` means the request was valid but
/// exceeds a resource guard and a streaming entry point should be used
/// instead; `Internal` means a structural invariant failed and indicates a
/// bug, not bad input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Usage(String),
    Domain(String),
    Capacity(String),
    Internal(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Capacity(msg) => write!(f, "capacity error: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
