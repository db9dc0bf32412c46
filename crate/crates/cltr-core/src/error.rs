//! Error type shared across the workbench.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("query {0} not found in dataset")]
    UnknownQuery(String),

    #[error("training diverged: {0}")]
    Diverged(String),

    #[error("click target unreachable: {0}")]
    TargetUnreachable(String),

    #[error("list has no relevant document")]
    NoRelevantDoc,

    #[error("empty sample")]
    EmptySample,

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
