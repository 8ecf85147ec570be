use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Operands belong to groups of different shape.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A matrix is not a well-defined bijective endomorphism of the group.
    #[error("invalid automorphism: {0}")]
    Validity(String),

    /// A size bound was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A precondition of an operation was violated.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The input lies outside the domain an algorithm supports.
    #[error("unsupported input: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A checkpoint or data file failed its consistency checks.
    #[error("integrity error in {path}: {reason}", path = .path.display())]
    Integrity { path: PathBuf, reason: String },

    /// The run stopped after its step budget; the checkpoint directory holds the progress.
    #[error("interrupted after {steps} steps")]
    Interrupted { steps: usize },

    #[error("io error on {path}: {source}", path = .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn integrity(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::Integrity {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
