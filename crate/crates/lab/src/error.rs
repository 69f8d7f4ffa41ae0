use std::path::PathBuf;

use thiserror::Error;

pub type LabResult<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] wlmf_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl LabError {
    /// Stable machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            LabError::Config(_) => "config",
            LabError::Core(_) => "numerical",
            LabError::Io { .. } => "io",
            LabError::Csv(_) => "csv",
            LabError::Json(_) => "json",
            LabError::Pool(_) => "thread-pool",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}
