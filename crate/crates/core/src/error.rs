use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("row {row}: cannot parse {value:?} in column {column} as a finite number")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("column {0} not found")]
    MissingColumn(String),

    #[error("fewer than 2 observations")]
    TooShort,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("window too short: {0}")]
    WindowTooShort(String),

    #[error("degenerate fit: {0}")]
    Degenerate(String),

    #[error("all candidate windows are degenerate")]
    AllDegenerate,

    #[error("bootstrap statistic degenerate on {failed} of {total} replicates")]
    BootstrapDegenerate { failed: usize, total: usize },

    #[error("not an explosive segment: rho_hat = {0} <= 1; confidence intervals require an explosive root")]
    NotExplosive(f64),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
}
