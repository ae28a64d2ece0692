use thiserror::Error;

/// Errors raised by group construction, algebra operations and report plumbing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("parse error in field `{field}`: {msg}")]
    Parse { field: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse { field: field.into(), msg: msg.into() }
    }
}
