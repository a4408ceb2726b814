use thiserror::Error;

pub type Result<T> = std::result::Result<T, DickeError>;

#[derive(Debug, Error)]
pub enum DickeError {
    /// Arguments outside the domain of an operation (bad n, k, occupation
    /// vector, site index, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    /// Malformed serialized input.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl DickeError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        DickeError::Domain(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        DickeError::Format(msg.into())
    }
}
