use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Inversion precondition violated. `order` is the angular order whose
    /// first-root coefficient vanished (or `None` when the failure is not tied
    /// to a single order).
    #[error("degenerate input{}: {reason}", order.map(|n| format!(" at order n={n}")).unwrap_or_default())]
    Degenerate { order: Option<i32>, reason: String },

    #[error("parse error in {path} at byte {offset}: {reason}")]
    Parse {
        path: String,
        offset: u64,
        reason: String,
    },

    #[error("index {index} out of range (count {count})")]
    Range { index: usize, count: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn degenerate(order: Option<i32>, reason: impl Into<String>) -> Self {
        Error::Degenerate {
            order,
            reason: reason.into(),
        }
    }

    pub(crate) fn parse(path: impl Into<String>, offset: u64, reason: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            offset,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
