use std::path::PathBuf;

use lgi_core::LgiError;
use lgi_oracle::OracleError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    /// A computation failed or two independent routes disagree.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    /// Parameter validation failures from the library are the caller's fault.
    pub(crate) fn from_setup(e: LgiError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<LgiError> for CliError {
    fn from(e: LgiError) -> Self {
        match e {
            LgiError::NonFinite { .. }
            | LgiError::Negative { .. }
            | LgiError::NonPositiveTau(_)
            | LgiError::InvalidGrid(_) => CliError::Usage(e.to_string()),
            LgiError::ProbabilityOutOfRange { .. } | LgiError::NonConvergence { .. } => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::InvalidConfig(msg) => CliError::Usage(msg),
            OracleError::Core(inner) => inner.into(),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
