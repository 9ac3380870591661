use std::path::PathBuf;

use thiserror::Error;

/// Usage or validation failure.
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
/// Too few Monte-Carlo samples for a conditioned estimate.
pub const EXIT_INSUFFICIENT_DATA: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("missing --{0}")]
    Missing(&'static str),

    #[error("cannot read config {path}: {reason}")]
    Config { path: PathBuf, reason: String },

    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] secplan_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Core(secplan_core::Error::ExcludedRegion { .. }) => EXIT_NUMERICAL,
            CliError::Core(secplan_core::Error::InsufficientData(_)) => EXIT_INSUFFICIENT_DATA,
            CliError::Output { .. } | CliError::Csv(_) => 1,
            _ => EXIT_USAGE,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
