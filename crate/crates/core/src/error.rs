use thiserror::Error;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("coin is not unitary: max |C†C - I| = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("eigensolver failed on momentum block (n={n}, m={m})")]
    EigenSolver { n: usize, m: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, WalkError>;

pub(crate) fn domain(msg: impl Into<String>) -> WalkError {
    WalkError::Domain(msg.into())
}
