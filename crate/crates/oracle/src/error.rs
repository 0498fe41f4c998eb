use thiserror::Error;

use lgi_core::LgiError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    /// The Fock cutoff is too small for an amplitude the calculation needs.
    #[error("truncation defect {defect:e} at amplitude {amplitude} exceeds {tol:e} with n_max = {n_max}")]
    Truncation { amplitude: f64, n_max: usize, defect: f64, tol: f64 },

    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Core(#[from] LgiError),
}

pub type Result<T> = std::result::Result<T, OracleError>;
