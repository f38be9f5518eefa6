use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {what} ({left} vs {right})")]
    Dimension {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("mode {mode} out of range for an order-{order} tensor")]
    Mode { mode: usize, order: usize },

    #[error("unsupported tensor order {order}: {reason}")]
    UnsupportedOrder { order: usize, reason: &'static str },

    #[error("size limit exceeded for {descriptor}: {requested} > {cap}")]
    Size {
        descriptor: String,
        requested: u64,
        cap: u64,
    },

    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("degenerate generator spec: {0}")]
    DegenerateSpec(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("aggregation error: group {0} has no timed trials")]
    Aggregation(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("malformed file {}: {reason}", path.display())]
    Format { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command line front end.
    ///
    /// `2` is reserved for usage errors, which are reported by the argument
    /// parser before any of these variants can exist.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Csv { .. } | Error::Format { .. } => 4,
            _ => 3,
        }
    }
}
