use std::io;
use std::path::PathBuf;

use rbf_adapt::Error as CoreError;
use thiserror::Error;

/// Exit status of a converged run.
pub const EXIT_OK: u8 = 0;
/// Hard I/O failure.
pub const EXIT_IO: u8 = 1;
/// The adaptive loop stopped without converging.
pub const EXIT_NOT_CONVERGED: u8 = 2;
pub const EXIT_USAGE: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("every sampled shape parameter gave a singular kernel matrix")]
    AllSingular,
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Core(e) => match e {
                CoreError::UnknownPreset(_)
                | CoreError::UnknownTarget(_)
                | CoreError::UnknownKernel(_)
                | CoreError::InvalidConfig(_)
                | CoreError::InvalidDomain { .. }
                | CoreError::InvalidShape(_) => EXIT_USAGE,
                _ => EXIT_NUMERICAL,
            },
            Self::AllSingular => EXIT_NUMERICAL,
            Self::Io { .. } | Self::Csv(_) | Self::Json(_) => EXIT_IO,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
