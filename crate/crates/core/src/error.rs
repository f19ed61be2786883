use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = EcocError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum EcocError {
    /// An argument is outside the operation's accepted range or has the wrong shape.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A size cap was exceeded (Hadamard order, enumeration width).
    #[error("size limit exceeded: {0}")]
    Size(String),

    /// A dependence model violates its own invariants.
    #[error("invalid model: {0}")]
    Model(String),

    /// A bound was requested outside the region where it applies.
    #[error("outside bound domain: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl EcocError {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        EcocError::Argument(msg.into())
    }

    pub(crate) fn model(msg: impl Into<String>) -> Self {
        EcocError::Model(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        EcocError::Domain(msg.into())
    }

    pub(crate) fn parse(line: u64, msg: impl Into<String>) -> Self {
        EcocError::Parse {
            line,
            message: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        EcocError::Io {
            path: path.into(),
            source,
        }
    }
}
