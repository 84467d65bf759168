use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("malformed CSV in {path} (line {line}): {message}")]
    Csv {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series length mismatch: {name} has {actual} slots, expected {expected}")]
    SeriesLength {
        name: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("battery cannot charge and discharge in the same slot")]
    SimultaneousChargeDischarge,

    #[error("{0} is undefined")]
    Undefined(&'static str),

    #[error("unknown parameter path `{0}`")]
    UnknownParameter(String),

    #[error("unknown table id `{0}`")]
    UnknownTable(String),

    #[error("channel `{0}` is not available")]
    ChannelAbsent(String),

    #[error("search space is empty: {0}")]
    EmptySpace(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the caller's configuration rather than the
    /// filesystem.
    pub fn is_config_error(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}
