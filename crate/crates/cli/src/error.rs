use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{location}: {message}")]
    Config { location: String, message: String },
    #[error("{0}")]
    Core(#[from] gmhd_core::Error),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config {
            location: "config".into(),
            message: message.into(),
        }
    }

    /// 2 for anything the user can fix in the configuration, 3/4 for solver
    /// failures.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Core(gmhd_core::Error::NonConvergence { .. }) => ExitCode::from(3),
            CliError::Core(gmhd_core::Error::Blowup { .. }) => ExitCode::from(4),
            _ => ExitCode::from(2),
        }
    }
}
