//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by alignment, training, and I/O operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Two series (or points) with different numbers of values per sample.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A series shorter than the required minimum length.
    #[error("series too short: length {len}, minimum {min}")]
    SeriesTooShort { len: usize, min: usize },

    /// A series containing NaN or infinite sample values.
    #[error("non-finite value at sample {index}")]
    NonFiniteValue { index: usize },

    /// The constrained search region admits no finite path to the
    /// bottom-right cell, so no alignment exists within it.
    #[error("disconnected region: bottom-right cell is unreachable")]
    DisconnectedRegion,

    /// A parameter outside its documented domain.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A classifier label alphabet with fewer than two distinct labels.
    #[error("degenerate label alphabet for waypoint {position}: {count} distinct label(s)")]
    DegenerateLabels { position: usize, count: usize },

    /// A feature vector whose length does not match the trained model.
    #[error("feature length mismatch: got {got}, model expects {expected}")]
    FeatureLengthMismatch { got: usize, expected: usize },

    /// Non-finite entries in a feature matrix handed to training.
    #[error("non-finite feature value in row {row}")]
    NonFiniteFeature { row: usize },

    /// An input file with no parseable content.
    #[error("{path}: empty file")]
    EmptyFile { path: String },

    /// A CSV row with the wrong number of columns for its schema.
    #[error("{path}:{line}: ragged row: expected {expected} columns, found {found}")]
    RaggedRow {
        path: String,
        line: usize,
        expected: usize,
        found: usize,
    },

    /// A CSV cell that does not parse as a number.
    #[error("{path}:{line}: non-numeric cell {cell:?}")]
    NonNumericCell {
        path: String,
        line: usize,
        cell: String,
    },

    /// A CSV file missing a required header row.
    #[error("{path}: missing required header {expected:?}")]
    MissingHeader { path: String, expected: String },

    /// A model file whose magic bytes do not match any supported format.
    #[error("model file: unrecognized magic bytes (version mismatch or not a model file)")]
    BadMagic,

    /// A model file that ends before its declared payload.
    #[error("model file: truncated (expected {expected} more bytes)")]
    Truncated { expected: usize },

    /// A model file whose trailing checksum does not match its contents.
    #[error("model file: checksum mismatch")]
    ChecksumMismatch,

    /// A model file whose declared dimensions are internally inconsistent.
    #[error("model file: inconsistent dimensions: {reason}")]
    InconsistentDims { reason: String },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
