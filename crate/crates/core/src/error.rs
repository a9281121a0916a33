use thiserror::Error;

pub type Result<T> = std::result::Result<T, FujitaError>;

#[derive(Debug, Error)]
pub enum FujitaError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("field contains non-finite value at node {node}")]
    NonFinite { node: usize },

    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    #[error("eigensolver did not converge after {iterations} iterations (last change {change:e})")]
    EigenNoConvergence { iterations: usize, change: f64 },

    #[error("certificate verification failed: {0}")]
    CertificateFailed(String),

    #[error("scan soundness violated at p={p}, q={q}: {reason}")]
    ScanSoundness { p: f64, q: f64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> FujitaError {
    FujitaError::InvalidParameter(msg.into())
}
