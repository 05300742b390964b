use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("FASTA parse error at line {line}: {message}")]
    Fasta { line: usize, message: String },

    #[error("label file parse error at line {line}: {message}")]
    Labels { line: usize, message: String },

    #[error("topology parse error for '{id}' at line {line}: {message}")]
    Topology { id: String, line: usize, message: String },

    #[error("feature table error at line {line}: {message}")]
    Table { line: usize, message: String },

    /// A caller violated an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid sequence: {0}")]
    Sequence(String),

    #[error("duplicate sequence id '{0}'")]
    DuplicateId(String),

    /// Training data unusable, e.g. a single class or non-finite values.
    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("model load error at '{path}': {message}")]
    ModelFormat { path: String, message: String },

    #[error("unsupported model schema '{found}' (expected '{expected}')")]
    SchemaVersion { found: String, expected: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn model(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ModelFormat {
            path: path.into(),
            message: message.into(),
        }
    }
}
