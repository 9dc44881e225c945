use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] bnsl_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 configuration or input error, 3 I/O error, 4 solver cap exceeded.
    /// Argument parsing errors exit with 2 from clap itself.
    pub fn exit_code(&self) -> u8 {
        use bnsl_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Core(E::Io(_)) => 3,
            CliError::Core(E::Csv(e)) if e.is_io_error() => 3,
            CliError::Core(E::EsCapExceeded { .. } | E::EnumerationCap { .. }) => 4,
            CliError::Core(_) => 2,
        }
    }
}
