use std::path::PathBuf;

use halfspace_depth::DepthError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{line}: {detail}")]
    Parse { path: PathBuf, line: u64, detail: String },
    #[error("{0}")]
    Usage(String),
    #[error("query {query}: {source}")]
    Depth {
        query: usize,
        #[source]
        source: DepthError,
    },
    #[error("every benchmark cell was skipped")]
    AllSkipped,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 ok, 1 other failures, 2 parse and usage errors, 3 degenerate or
    /// non-general-position input, 4 every benchmark cell skipped.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. } | Self::Usage(_) => 2,
            Self::Depth { source, .. } => match source {
                DepthError::GeneralPosition { .. } | DepthError::Degenerate(_) => 3,
                DepthError::InvalidInput(_) => 2,
                _ => 1,
            },
            Self::AllSkipped => 4,
            Self::Io { .. } | Self::Csv(_) | Self::Json(_) => 1,
        }
    }
}
