use thiserror::Error;

/// Errors raised by the calculus, construction and verification layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0} (must be between 1 and 4)")]
    BadDimension(usize),

    #[error("frequency bound exceeded: |k| = {found} > {bound} (runaway symbolic expression)")]
    FrequencyOverflow { found: i64, bound: i32 },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid degree: {0}")]
    Degree(String),

    #[error("{what} failed at sample {point:?}: residual {residual:.3e}")]
    Validation {
        what: String,
        residual: f64,
        point: Vec<f64>,
    },

    #[error("degenerate frame: {0}")]
    Degenerate(String),

    #[error("hypothesis not satisfied: {what} (residual {residual:.3e})")]
    Hypothesis { what: String, residual: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerically ambiguous: {0}")]
    Ambiguous(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
