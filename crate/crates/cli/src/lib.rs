//! Library backing the `balanced-ga` binary: option resolution, the batch
//! experiment runner and the comparison/summary reports. Kept as a library
//! so the pieces are unit-testable without spawning processes.

pub mod config;
pub mod experiment;
pub mod report;

use std::path::PathBuf;
use thiserror::Error;

/// Errors surfaced to the command line, split by exit code: usage and
/// configuration problems exit with 1, I/O failures with 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } => 2,
        }
    }
}

impl From<balanced_ga::Error> for CliError {
    fn from(err: balanced_ga::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}
