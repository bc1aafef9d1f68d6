use thiserror::Error;

/// Errors raised by the model-selection pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate column: variable x{variable} has zero variance in the training split")]
    DegenerateColumn { variable: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("method not applicable: {0}")]
    NotApplicable(String),

    #[error("selection failed: {0}")]
    SelectionFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid_arg(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
