use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the loaders, numerical kernels and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("manifest parse error: {0}")]
    ManifestParse(String),

    #[error("manifest entry {index}: missing or invalid field `{field}`")]
    ManifestField { index: usize, field: &'static str },

    #[error("manifest entry {index}: duplicate model id `{id}`")]
    DuplicateModelId { index: usize, id: String },

    #[error("manifest entry {index}: empty family label for `{id}`")]
    EmptyFamily { index: usize, id: String },

    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },

    #[error("expected a 2-D array, found {ndim} dimension(s)")]
    NotTwoDimensional { ndim: usize },

    #[error("unsupported dtype `{0}`")]
    UnsupportedDtype(String),

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("ragged CSV: row {row} has {found} columns, expected {expected}")]
    RaggedCsv {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("invalid shape: {0}")]
    Shape(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("too few samples: {0}")]
    TooFewSamples(String),

    #[error("singular value decomposition failed to converge")]
    SvdFailure,

    #[error("transport problem too large for exhaustive search ({rows}x{cols} > {limit} cells)")]
    TooLarge {
        rows: usize,
        cols: usize,
        limit: usize,
    },

    #[error("model `{0}` has no family label")]
    Unlabeled(String),

    #[error("degenerate family structure: {0}")]
    DegenerateFamilies(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
