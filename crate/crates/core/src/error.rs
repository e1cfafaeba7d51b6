use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("matrix is not symmetric: entries ({row},{col}) and ({col},{row}) differ by {diff:e}")]
    NonSymmetric { row: usize, col: usize, diff: f64 },

    #[error("matrix has zero nuclear norm")]
    ZeroMatrix,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("rho log-argument is not positive ({value:e}); covariance exceeds the prior")]
    NonFiniteRho { value: f64 },

    #[error("arm has (numerically) zero posterior norm")]
    DegenerateArm,

    #[error("invalid bivariate covariance: correlation {corr} has magnitude >= 1")]
    InvalidCovariance { corr: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("rejection sampling exhausted after {attempts} attempts")]
    RejectionExhausted { attempts: usize },

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}
