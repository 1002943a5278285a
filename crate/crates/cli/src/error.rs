use std::path::PathBuf;

/// Exit status for usage and configuration problems.
pub const EXIT_USAGE: u8 = 1;
/// Exit status for failures while reading data or computing.
pub const EXIT_FAILURE: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config {path}: {message}")]
    Config { path: String, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("{path}:{line}: {message}")]
    Input { path: PathBuf, line: u64, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Compute(#[from] mesa_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Invalid(_) => EXIT_USAGE,
            CliError::Input { .. } | CliError::Io { .. } | CliError::Compute(_) => EXIT_FAILURE,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
