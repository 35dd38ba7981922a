use std::path::{Path, PathBuf};

use thiserror::Error;

/// Failures that end a command with the usage/IO exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("invalid JSON: {0}")]
    Json(serde_json::Error),

    #[error("field `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Solver(#[from] contact_lcp::Error),

    #[error("{path}: {inner}")]
    InFile { path: PathBuf, inner: Box<CliError> },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn in_file(self, path: &Path) -> Self {
        CliError::InFile {
            path: path.to_path_buf(),
            inner: Box::new(self),
        }
    }
}
