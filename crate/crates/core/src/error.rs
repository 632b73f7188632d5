use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by grid construction, file I/O and the alignment pipeline.
#[derive(Debug, Error)]
pub enum FaaError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: cannot parse {text:?} as a finite number")]
    BadCell {
        row: usize,
        column: usize,
        text: String,
    },

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("truncated payload: expected {expected} samples, found {found}")]
    TruncatedPayload { expected: usize, found: usize },

    #[error("grid must be square, got {height}x{width}")]
    NonSquare { height: usize, width: usize },

    #[error("grid size {0} must be even")]
    OddSize(usize),

    #[error("grid size {size} is below the minimum of {min}")]
    TooSmall { size: usize, min: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl FaaError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        FaaError::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures reading or writing files, including malformed file contents.
    pub fn is_io(&self) -> bool {
        matches!(
            self,
            FaaError::Io { .. }
                | FaaError::RaggedRow { .. }
                | FaaError::BadCell { .. }
                | FaaError::MalformedHeader(_)
                | FaaError::TruncatedPayload { .. }
        )
    }

    pub fn is_config(&self) -> bool {
        matches!(self, FaaError::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, FaaError>;
