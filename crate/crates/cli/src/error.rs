use std::io;
use std::path::PathBuf;

use extbc::ModelError;
use thiserror::Error;

use crate::dataset::DatasetError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
}

impl CliError {
    /// 1 usage, 2 data, 3 numerical or validation failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Dataset(_) | CliError::Io { .. } => 2,
            CliError::Model(_) | CliError::ValidationFailed(_) => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
