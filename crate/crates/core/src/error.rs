use thiserror::Error;

/// Errors surfaced by geometric constructions and queries.
#[derive(Debug, Error)]
pub enum GeomError {
    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("reference point is not strictly interior: {0}")]
    ReferenceNotInterior(String),

    #[error("numerical failure in {context}: {detail}")]
    Numerical { context: String, detail: String },

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

impl GeomError {
    pub fn numerical(context: &str, detail: impl Into<String>) -> Self {
        GeomError::Numerical { context: context.to_string(), detail: detail.into() }
    }
}

pub type GeomResult<T> = Result<T, GeomError>;
