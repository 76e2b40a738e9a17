//! Error type with the command-line exit-code contract.

use std::path::PathBuf;

use thiserror::Error;

/// Exit codes: 2 for configuration/usage problems, 3 for I/O and malformed
/// input files, 4 for streams too empty to analyze. (`reproduce` exits 1
/// when a criterion fails; that path does not go through this type.)
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {detail}")]
    Parse { path: PathBuf, detail: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    EmptyStream(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Parse { .. } | CliError::Io { .. } => 3,
            CliError::EmptyStream(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, detail: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.into(),
            detail: detail.into(),
        }
    }
}
