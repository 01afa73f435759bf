use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read config file {path}: {source}")]
    ConfigRead {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config file {path}: {message}")]
    ConfigParse { path: PathBuf, message: String },
    #[error("{0}")]
    Config(String),
    #[error("cannot write output {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Library(#[from] bwkb::Error),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    /// 2 for configuration failures, 1 for numerical ones.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ConfigRead { .. } | CliError::ConfigParse { .. } | CliError::Config(_) => 2,
            CliError::Library(e) if e.is_input_error() => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        if self.exit_code() == 2 {
            "configuration"
        } else {
            "numerical"
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
