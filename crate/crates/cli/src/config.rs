//! The resolved configuration of one invocation. It is echoed verbatim into
//! the provenance line of every CSV file.

use std::path::PathBuf;

use lgi_core::optimizer::{SearchConfig, SweepGrid};
use lgi_core::{ComplexAmplitude, MeasurementSetting, ModeParams, StateKind};
use serde::Serialize;

use crate::args::{AlphaArgs, GridArgs};
use crate::error::{CliError, Result};
use crate::output::Format;

pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_D_TAU: f64 = 0.025;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Amplitude {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Beta {
    pub r: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub tau_min: f64,
    pub tau_max: f64,
    pub d_tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub d_r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditSettings {
    pub draws: usize,
    pub seed: u64,
    pub tol: f64,
    pub trunc_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<u8>,
    pub states: Vec<StateKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Amplitude>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    pub gammas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Beta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radial_grid: Option<RadialGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditSettings>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: &'static str, format: Format) -> Self {
        Self {
            command,
            figure: None,
            states: Vec::new(),
            alpha: None,
            omega: None,
            gammas: Vec::new(),
            beta: None,
            tau: None,
            grid: None,
            radial_grid: None,
            fd_step: None,
            search: None,
            audit: None,
            output: None,
            format,
        }
    }

    pub fn with_mode(mut self, a: ComplexAmplitude, omega: f64) -> Self {
        self.alpha = Some(Amplitude { re: a.re(), im: a.im() });
        self.omega = Some(omega);
        self
    }

    /// `lgi <version> <config as JSON>`.
    pub fn provenance(&self) -> String {
        let json = serde_json::to_string(self).expect("config is plain data");
        format!("lgi {} {json}", env!("CARGO_PKG_VERSION"))
    }
}

pub fn resolve_alpha(a: &AlphaArgs, default: f64) -> Result<ComplexAmplitude> {
    let amp = match (a.alpha, a.alpha_mod) {
        (Some(x), _) => ComplexAmplitude::real(x),
        (None, Some(m)) => {
            if m < 0.0 {
                return Err(CliError::Usage(format!("--alpha-mod must be non-negative, got {m}")));
            }
            ComplexAmplitude::polar(m, a.alpha_arg.unwrap_or(0.0))
        }
        (None, None) => ComplexAmplitude::real(default),
    };
    amp.map_err(CliError::from_setup)
}

pub fn mode(omega: f64, gamma: f64) -> Result<ModeParams> {
    ModeParams::new(omega, gamma).map_err(CliError::from_setup)
}

pub fn setting(r: f64, theta: f64) -> Result<MeasurementSetting> {
    MeasurementSetting::new(r, theta).map_err(CliError::from_setup)
}

pub fn check_tau(tau: f64) -> Result<f64> {
    if tau.is_finite() && tau > 0.0 {
        Ok(tau)
    } else {
        Err(CliError::Usage(format!("--tau must be positive, got {tau}")))
    }
}

/// Fill unset grid flags from `defaults`; a missing `tau_max` with no default is a usage error.
pub fn resolve_grid(g: &GridArgs, tau_min: Option<f64>, tau_max: Option<f64>, d_tau: f64) -> Result<GridSpec> {
    let d_tau = g.d_tau.unwrap_or(d_tau);
    let tau_max = g
        .tau_max
        .or(tau_max)
        .ok_or_else(|| CliError::Usage("--tau-max is required for grid commands".into()))?;
    let tau_min = g.tau_min.or(tau_min).unwrap_or(d_tau);
    let spec = GridSpec { tau_min, tau_max, d_tau };
    spec.sweep_grid()?;
    Ok(spec)
}

impl GridSpec {
    pub fn sweep_grid(&self) -> Result<SweepGrid> {
        let g = SweepGrid::new(self.tau_min, self.tau_max, self.d_tau).map_err(CliError::from_setup)?;
        if g.taus().is_empty() {
            return Err(CliError::Usage(format!(
                "no grid point n*{} lies in [{}, {}]",
                self.d_tau, self.tau_min, self.tau_max
            )));
        }
        Ok(g)
    }

    pub fn taus(&self) -> Vec<f64> {
        self.sweep_grid().map(|g| g.taus()).unwrap_or_default()
    }
}

impl RadialGrid {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.r_max - self.r_min) / self.d_r + 1e-9).floor() as usize;
        (0..=n).map(|i| self.r_min + i as f64 * self.d_r).collect()
    }
}
