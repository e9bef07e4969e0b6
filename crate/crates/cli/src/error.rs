use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Numerical(#[from] kleinvortex::Error),

    /// The run finished and wrote its outputs, but ended abnormally.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numerical(kleinvortex::Error::InvalidInput(_)) => 2,
            CliError::Numerical(_) | CliError::Failed(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
