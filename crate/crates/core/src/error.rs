use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the numeration, field, interval and spectral routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid digit string: {0}")]
    InvalidDigits(String),

    #[error("division by zero in Q(sqrt {0})")]
    DivisionByZero(u64),

    #[error("field mismatch: Q(sqrt {left}) vs Q(sqrt {right})")]
    FieldMismatch { left: u64, right: u64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
