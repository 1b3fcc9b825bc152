use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum GcasError {
    #[error("value out of range: {0}")]
    Range(String),

    #[error("invalid input: {0}")]
    Validation(String),

    /// Every violated constraint of a parameter bundle, in check order.
    #[error("invalid parameters:\n{}", .0.join("\n"))]
    InvalidParams(Vec<String>),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = GcasError> = std::result::Result<T, E>;
