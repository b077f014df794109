//! Error type shared across the crate.

use std::fmt;
use std::io;

/// Error type for network construction, dynamics, learning, and I/O.
#[derive(Debug)]
pub enum Error {
    /// Vector or matrix shapes disagree with the network topology.
    Dimension(String),
    /// A state update produced NaN or infinite values.
    NonFinite(String),
    /// A file did not match its expected binary format (IDX, checkpoint, PGM).
    Format(String),
    /// Invalid configuration value or key.
    Config(String),
    /// Invalid argument to an operation (bad label, forbidden weight, ...).
    Argument(String),
    /// Underlying I/O failure.
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(msg) => write!(f, "dimension mismatch: {}", msg),
            Error::NonFinite(msg) => write!(f, "non-finite state: {}", msg),
            Error::Format(msg) => write!(f, "format error: {}", msg),
            Error::Config(msg) => write!(f, "config error: {}", msg),
            Error::Argument(msg) => write!(f, "invalid argument: {}", msg),
            Error::Io(err) => write!(f, "i/o error: {}", err),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(err: io::Error) -> Self {
        Error::Io(err)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
