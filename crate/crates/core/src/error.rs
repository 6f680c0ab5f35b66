use std::path::PathBuf;

/// Errors produced by the seeding, clustering and evaluation routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("empty input: {0}")]
    Empty(String),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("need at least {required} points, got {found}")]
    TooFewPoints { required: usize, found: usize },
    #[error(
        "random sample of {sample} points is smaller than the required {required}; use plain AIMK instead"
    )]
    SampleTooSmall { sample: usize, required: usize },
    #[error("requested {requested} centers but only {available} distinct points are available")]
    NotEnoughDistinctPoints { requested: usize, available: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("covariance of mixture component {0} is not symmetric positive-definite")]
    NotPositiveDefinite(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
