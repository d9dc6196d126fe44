use std::io;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("numerical domain: {0}")]
    Domain(#[from] dbtunnel_core::Error),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("i/o: {0}")]
    Io(#[from] io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 1 usage, 2 numerical domain or output failure, 3 validation.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(1),
            CliError::Domain(_) | CliError::Io(_) | CliError::Json(_) => ExitCode::from(2),
            CliError::Validation(_) => ExitCode::from(3),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
