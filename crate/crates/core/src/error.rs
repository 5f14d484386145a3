use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("momentum is off shell: {0}")]
    OffShell(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("cannot sum linear and antilinear operators")]
    MixedAntilinearity,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
