use std::io;
use std::path::PathBuf;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitCode {
    Success = 0,
    Io = 1,
    Usage = 2,
    Estimator = 3,
    Contract = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid constellation file {path}: {reason}")]
    BadFile { path: PathBuf, reason: String },
    #[error("{0}")]
    Domain(#[from] apsk_core::Error),
    #[error("estimator inconsistency: {0}")]
    Estimator(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::BadFile { .. } | CliError::Domain(_) => ExitCode::Usage,
            CliError::Estimator(_) => ExitCode::Estimator,
            CliError::Contract(_) => ExitCode::Contract,
            CliError::Io { .. } => ExitCode::Io,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
