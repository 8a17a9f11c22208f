use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to decode {path}: {reason}")]
    Decode { path: PathBuf, reason: String },

    #[error("unsupported image format in {path}: {reason}")]
    UnsupportedFormat { path: PathBuf, reason: String },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("sample {value} at index {index} lies outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },

    #[error("input plane is empty")]
    EmptyInput,

    #[error("cannot decompose {dims:?} into {requested} levels: approximation is already 1x1 at level {level}")]
    TooManyLevels {
        dims: (usize, usize),
        requested: usize,
        level: usize,
    },

    #[error("corrupt pyramid: {0}")]
    CorruptPyramid(String),

    #[error("pyramid mismatch: {0}")]
    PyramidMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("image of {found:?} is smaller than the required {min:?}")]
    TooSmall {
        min: (usize, usize),
        found: (usize, usize),
    },

    #[error("original image has no visible edges")]
    NoVisibleEdges,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
