use std::fmt;

/// Crate-wide error type.
#[derive(Debug)]
pub enum Error {
    /// Malformed pattern or matrix text.
    Parse(String),
    /// A parameter is out of its documented range.
    InvalidArgument(String),
    /// A construction would exceed the configured cell or weight cap.
    CapExceeded(String),
    /// An exhaustive check ran out of its operation budget.
    BudgetExceeded(String),
    /// An internal cross-check failed; this indicates a bug, not bad input.
    Inconsistency(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::CapExceeded(msg) => write!(f, "size cap exceeded: {msg}"),
            Error::BudgetExceeded(msg) => write!(f, "budget exceeded: {msg}"),
            Error::Inconsistency(msg) => write!(f, "internal inconsistency: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
