use thiserror::Error;

/// Errors raised by the algebra and decomposition routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot mix exact and floating scalars without an explicit promotion")]
    ModeMismatch,
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the zero form is not allowed here")]
    ZeroForm,
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution is not invertible")]
    NotInvertible,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("numerically ambiguous: {0}")]
    Ambiguous(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
