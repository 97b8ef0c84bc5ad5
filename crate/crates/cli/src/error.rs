use std::path::Path;

use deliberation::Error;
use thiserror::Error as ThisError;

/// Exit codes of the `deliberate` binary.
pub mod exit {
    pub const OK: u8 = 0;
    /// Usage errors, unreadable files, failed verification.
    pub const FAILURE: u8 = 1;
    pub const ETA_UNMET: u8 = 2;
    pub const GUARD: u8 = 3;
    pub const INCOMPATIBLE: u8 = 4;
    pub const INADMISSIBLE: u8 = 5;
    pub const PARSE: u8 = 6;
}

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid instance file: {0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e {
                Error::GuardExceeded { .. } | Error::WeightOverflow => exit::GUARD,
                Error::IncompatibleScheduler { .. } | Error::OracleMissing | Error::UnsupportedMethod { .. } => {
                    exit::INCOMPATIBLE
                }
                Error::Inadmissible(_) => exit::INADMISSIBLE,
                Error::Parse(_) => exit::PARSE,
                _ => exit::FAILURE,
            },
            CliError::Json(_) | CliError::Format(_) => exit::PARSE,
            CliError::Io { .. } | CliError::Usage(_) | CliError::Verify(_) => exit::FAILURE,
        }
    }
}
