use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be at least 2x2, got {rows}x{cols}")]
    TooSmall { rows: usize, cols: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteInput { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is identically zero after centering; no leading direction exists")]
    ZeroMatrix,

    #[error("all projection scores are equal; regression slope is undefined")]
    DegenerateRegressor,

    #[error("only {kept} columns remain after trimming, need at least 3")]
    InsufficientColumns { kept: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("position vector is not centered (sum = {0:e})")]
    UncenteredEta(f64),

    #[error("position vector is not nondecreasing")]
    UnsortedEta,

    #[error("signal has zero norm")]
    ZeroSignal,

    #[error("within-group variance is zero")]
    DegenerateVariance,

    #[error("parse error at row {row}, column {col}: {reason}")]
    Parse {
        row: usize,
        col: usize,
        reason: String,
    },

    #[error("duplicate sample id {0:?}")]
    DuplicateSampleId(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures caused by degenerate numerical input rather than
    /// malformed input (the CLI maps these to exit code 3).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ZeroMatrix
                | Error::DegenerateRegressor
                | Error::DegenerateVariance
                | Error::ZeroSignal
        )
    }
}
