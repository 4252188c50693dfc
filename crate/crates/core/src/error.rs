//! Error type shared across the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes surfaced by library operations.
///
/// `Validation` covers bad arguments, `Resource` covers enumeration or
/// memory budgets, `Overflow` names the term that left 128-bit range.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A range-style precondition failed (e.g. sieve limit below 2).
    EmptyRange(String),
    /// Argument validation failed.
    Validation(String),
    /// An enumeration or memory budget would be exceeded.
    Resource(String),
    /// Integer arithmetic left the supported range.
    Overflow(String),
    /// A real-valued function was evaluated outside its domain.
    Domain(String),
    /// The operation is not defined for the requested parameters.
    Unsupported(String),
    /// I/O or file-format failure for persisted caches.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyRange(m) => write!(f, "empty range: {m}"),
            Error::Validation(m) => write!(f, "invalid argument: {m}"),
            Error::Resource(m) => write!(f, "resource budget exceeded: {m}"),
            Error::Overflow(m) => write!(f, "arithmetic overflow: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
            Error::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code for the CLI: validation errors are 2, resource
    /// errors 3, everything else 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 3,
            _ => 2,
        }
    }
}
