//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("manifest row {row}: bad field `{field}`: {message}")]
    ManifestParse {
        row: usize,
        field: &'static str,
        message: String,
    },

    #[error("segmentation failed: {0}")]
    SegmentationFailure(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("insufficient patches: {0}")]
    InsufficientPatches(String),

    #[error("insufficient rank: {0}")]
    InsufficientRank(String),

    #[error("insufficient overlap: {valid_bits} joint valid bits, need at least {min_valid_bits}")]
    InsufficientOverlap { valid_bits: u64, min_valid_bits: u64 },

    #[error("insufficient scores: {0}")]
    InsufficientScores(String),

    #[error("format error in {path}: {message}")]
    Format { path: String, message: String },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn format(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}
