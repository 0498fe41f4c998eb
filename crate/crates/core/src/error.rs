use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LgiError {
    #[error("non-finite value for {what}: {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("{what} must be non-negative, got {value}")]
    Negative { what: &'static str, value: f64 },

    #[error("measurement spacing must be positive, got tau = {0}")]
    NonPositiveTau(f64),

    /// A probability left `[0, 1]` by more than the rounding allowance.
    #[error("probability {name} = {value:e} is outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    #[error("pattern search did not converge within {iterations} iterations at tau = {tau}")]
    NonConvergence { tau: f64, iterations: usize },

    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, LgiError>;

pub(crate) fn finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(LgiError::NonFinite { what, value })
    }
}
