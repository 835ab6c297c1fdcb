use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced to the user; each maps to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, missing or malformed files.
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] modica_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// A well-formed file whose columns disagree with each other.
    #[error("corrupt solution: {0}")]
    Corrupt(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Corrupt(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
