use std::io;
use std::path::Path;

use bbcap_core::CapacityError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Capacity(#[from] CapacityError),

    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },

    #[error("{failed} of {total} checks failed")]
    Verify { failed: usize, total: usize },

    #[error("thread pool: {0}")]
    Pool(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    /// Tag printed after `kind=` on the error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config(_) => "config",
            Self::Capacity(e) => e.kind(),
            Self::Io { .. } => "io",
            Self::Verify { .. } => "verify",
            Self::Pool(_) => "runtime",
        }
    }

    /// The single line written to stderr.
    pub fn line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error: kind={} msg={}", self.kind(), msg)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
