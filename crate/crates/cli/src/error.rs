use std::path::PathBuf;

use thiserror::Error;

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

    #[error("{path}: cannot decode: {detail}")]
    Decode { path: PathBuf, detail: String },

    #[error("{0}")]
    Unsupported(String),

    #[error(transparent)]
    Core(#[from] chaocrypt::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "E_USAGE",
            CliError::Io { .. } => "E_IO",
            CliError::Decode { .. } => "E_DECODE",
            CliError::Unsupported(_) => "E_UNSUPPORTED_FORMAT",
            CliError::Core(e) => e.code(),
        }
    }

    /// 1 validation, 2 I/O, 3 cipher or metric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Unsupported(_) => 1,
            CliError::Io { .. } | CliError::Decode { .. } => 2,
            CliError::Core(e) if e.is_validation() => 1,
            CliError::Core(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
