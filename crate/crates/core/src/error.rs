use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid resolution data:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("unknown divisor {0:?}")]
    UnknownDivisor(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(
        "unloading did not terminate after {0} steps; intersection matrix is not negative definite"
    )]
    NonTerminating(usize),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
