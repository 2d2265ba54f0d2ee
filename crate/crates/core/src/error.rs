use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported surface: {0}")]
    Unsupported(String),
    #[error("does not exist: {0}")]
    Nonexistent(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
