use std::io;
use std::path::PathBuf;

use mibwarden_core::CoreError;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad flag, bad profile, bad environment value.
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    /// Malformed input file or stream, with the 1-based line it was found on.
    #[error("{origin}:{line}: {message}")]
    Format { origin: String, line: usize, message: String },
    #[error("incompatible model: {0}")]
    Schema(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Error {
        Error::Io { path: path.into(), source }
    }

    pub fn format(origin: impl Into<String>, line: usize, message: impl Into<String>) -> Error {
        Error::Format { origin: origin.into(), line, message: message.into() }
    }

    /// 2 config, 3 data format, 4 schema mismatch, 5 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io { .. } => 2,
            Error::Format { .. } => 3,
            Error::Schema(_) => 4,
            Error::Internal(_) => 5,
            Error::Core(e) => match e {
                CoreError::InvalidParameter(_) | CoreError::InvalidFraction => 2,
                CoreError::SchemaMismatch { .. } | CoreError::RecordTooShort { .. } => 4,
                _ => 3,
            },
        }
    }
}
