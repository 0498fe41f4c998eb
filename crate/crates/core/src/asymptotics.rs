//! Closed-form limits and approximations for the regimes the full pipelines
//! cannot reach comfortably: τ → ∞ with damping, and the τ → +0, r → ∞ corner
//! where the maximized K3 climbs toward 3/2.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::types::{check_tau_positive, ComplexAmplitude, MeasurementSetting};

/// x = r²τ at which 2cos4x − cos8x peaks.
pub const PEAK_X: f64 = PI / 12.0;

/// Largest τ at which the small-τ ridge approximations are meant to be used.
pub const SMALL_TAU_WINDOW: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    TauToInf,
    TauToZero,
    TwoLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitResult {
    pub value: f64,
    pub regime: Regime,
}

/// lim_{τ→∞} K3 = exp(−4r²) for a damped coherent state, whatever α, ω, θ.
pub fn coherent_tau_inf_limit(s: &MeasurementSetting) -> f64 {
    (-4.0 * s.r() * s.r()).exp()
}

/// The closed-form τ → ∞ expression quoted for the cat state with α = s·e^{iμ}.
///
/// Note that for Γ > 0 the cat state decays to the vacuum, so the long-time K3
/// computed by the full pipeline is exp(−4r²), the same as for a coherent
/// state; this expression does not reduce to that except at r = 0.
pub fn cat_tau_inf_limit(a: ComplexAmplitude, s: &MeasurementSetting) -> f64 {
    let (m, mu) = (a.norm(), a.arg());
    let (r, theta) = (s.r(), s.theta());
    let d = theta - mu;
    let e2r = (2.0 * r * r).exp();
    let e2s = (2.0 * m * m).exp();
    let pref = (-2.0 * r * (2.0 * r + m * d.cos())).exp() / (4.0 * (1.0 + e2s));
    pref * ((2.0 * r * m * d.cos()).exp() * (3.0 + e2r + 4.0 * e2s)
        + (1.0 - e2r) * (2.0 * r * m * d.sin()).cos())
}

pub fn tau_inf_limit_coherent(s: &MeasurementSetting) -> LimitResult {
    LimitResult { value: coherent_tau_inf_limit(s), regime: Regime::TauToInf }
}

/// Undamped coherent K3 on the ridge θ = π − τ for α = 1/2:
/// 2e^{4r²(cosτ−1)}cos[2r(1+2r)sinτ] − e^{−8r²sin²τ}cos[4r(1+2r cosτ)sinτ].
pub fn ridge_function_exact(r: f64, tau: f64) -> Result<f64> {
    check_tau_positive(tau)?;
    let (sn, cs) = tau.sin_cos();
    Ok(2.0 * (4.0 * r * r * (cs - 1.0)).exp() * (2.0 * r * (1.0 + 2.0 * r) * sn).cos()
        - (-8.0 * r * r * sn * sn).exp() * (4.0 * r * (1.0 + 2.0 * r * cs) * sn).cos())
}

/// Small-τ, large-r form of [`ridge_function_exact`]:
/// 2e^{−2r²τ²}cos(4r²τ) − e^{−8r²τ²}cos(8r²τ).
///
/// Drops terms of order rτ, so it is only close to the exact ridge when rτ is
/// small, e.g. along r²τ = const as τ → 0.
pub fn coherent_ridge_approx(r: f64, tau: f64) -> f64 {
    let x = r * r * tau;
    2.0 * (-2.0 * x * tau).exp() * (4.0 * x).cos() - (-8.0 * x * tau).exp() * (8.0 * x).cos()
}

/// g(x) = 2cos4x − cos8x, the τ → 0 limit of both ridge functions at fixed x = r²τ.
pub fn scaled_limit_function(x: f64) -> f64 {
    2.0 * (4.0 * x).cos() - (8.0 * x).cos()
}

pub fn tau_to_zero_limit(x: f64) -> LimitResult {
    LimitResult { value: scaled_limit_function(x), regime: Regime::TauToZero }
}

/// K3 = 2cos(ω₀τ) − cos(2ω₀τ) for a precessing two-level system.
pub fn two_level_k3(omega0: f64, tau: f64) -> LimitResult {
    let w = omega0 * tau;
    LimitResult { value: 2.0 * w.cos() - (2.0 * w).cos(), regime: Regime::TwoLevel }
}

/// Small-τ, large-r approximation of the undamped cat K3 on θ = π/2 − τ, for α = 1/2.
pub fn cat_ridge_approx(r: f64, tau: f64) -> f64 {
    let sqrt_e = 0.5f64.exp();
    let rt = r * tau;
    let x = r * r * tau;
    (-2.0 * rt).exp() / (1.0 + sqrt_e)
        * ((1.0 + (4.0 * rt).exp() + 2.0 * (0.5 + 2.0 * rt).exp()) * (4.0 * x).cos()
            - (1.0 + (0.5 + 16.0 * x * tau).exp()) * (8.0 * x).cos())
}
