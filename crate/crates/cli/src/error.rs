use std::path::{Path, PathBuf};

use strayeval_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes. Stable across releases.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const IO: i32 = 2;
    pub const MALFORMED: i32 = 3;
    pub const DIMENSIONS: i32 = 4;
    pub const FDIR: i32 = 10;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },

    #[error("{0}")]
    Dimensions(String),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Output(_) => exit::IO,
            CliError::Malformed { .. } => exit::MALFORMED,
            CliError::Dimensions(_) => exit::DIMENSIONS,
            CliError::Usage(_) => exit::USAGE,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    /// Classifies a library error raised while handling `path`.
    pub fn from_core(path: &Path, err: CoreError) -> Self {
        match err {
            CoreError::Decode { .. }
            | CoreError::Channels { .. }
            | CoreError::BitDepth(_)
            | CoreError::InvalidDimensions { .. } => {
                CliError::Malformed { path: path.to_path_buf(), message: err.to_string() }
            }
            CoreError::DimensionMismatch { .. } => CliError::Dimensions(err.to_string()),
            CoreError::InvalidParameter(msg) => CliError::Usage(msg),
            CoreError::Encode(msg) => CliError::Output(format!("{}: {msg}", path.display())),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::DimensionMismatch { .. } => CliError::Dimensions(err.to_string()),
            CoreError::InvalidParameter(msg) => CliError::Usage(msg),
            other => CliError::Output(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
