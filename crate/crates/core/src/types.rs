//! Shared value types: amplitudes, mode parameters, measurement settings and
//! the per-τ evaluation record.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{finite, LgiError, Result};

/// A finite complex mode amplitude (α, β, or a dyad label).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexAmplitude(Complex64);

impl ComplexAmplitude {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        Ok(Self(Complex64::new(finite("re", re)?, finite("im", im)?)))
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(re, 0.0)
    }

    /// `modulus · e^{i·arg}`.
    pub fn polar(modulus: f64, arg: f64) -> Result<Self> {
        finite("modulus", modulus)?;
        finite("arg", arg)?;
        let c = Complex64::from_polar(modulus, arg);
        Self::new(c.re, c.im)
    }

    pub fn from_complex(c: Complex64) -> Result<Self> {
        Self::new(c.re, c.im)
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn norm(self) -> f64 {
        self.0.norm()
    }

    pub fn arg(self) -> f64 {
        self.0.arg()
    }
}

impl From<ComplexAmplitude> for Complex64 {
    fn from(a: ComplexAmplitude) -> Self {
        a.0
    }
}

impl fmt::Display for ComplexAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.0.re, self.0.im)
    }
}

/// Angular velocity ω and spontaneous emission rate Γ of the cavity mode,
/// both in units where ω multiplies τ directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeParams {
    omega: f64,
    gamma: f64,
}

impl ModeParams {
    pub fn new(omega: f64, gamma: f64) -> Result<Self> {
        finite("omega", omega)?;
        finite("gamma", gamma)?;
        if gamma < 0.0 {
            return Err(LgiError::Negative { what: "gamma", value: gamma });
        }
        Ok(Self { omega, gamma })
    }

    /// ω = 1 with the given damping.
    pub fn unit_frequency(gamma: f64) -> Result<Self> {
        Self::new(1.0, gamma)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Complex frequency Ω = ω − iΓ.
    pub fn complex_frequency(&self) -> Complex64 {
        Complex64::new(self.omega, -self.gamma)
    }

    /// Label propagator e^{−iΩt}.
    pub fn label_factor(&self, t: f64) -> Complex64 {
        Complex64::from_polar((-self.gamma * t).exp(), -self.omega * t)
    }

    /// Decoherence weight 1 − e^{−2Γt}, evaluated without cancellation.
    pub fn decay_fraction(&self, t: f64) -> f64 {
        -(-2.0 * self.gamma * t).exp_m1()
    }
}

/// Displaced-parity setting β = r·e^{iθ}.
///
/// θ is kept exactly as supplied so ridge lines such as θ = π − τ can run
/// negative; [`MeasurementSetting::reduced_theta`] gives the `[0, 2π)` value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetting {
    r: f64,
    theta: f64,
}

impl MeasurementSetting {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        finite("r", r)?;
        finite("theta", theta)?;
        if r < 0.0 {
            return Err(LgiError::Negative { what: "r", value: r });
        }
        Ok(Self { r, theta })
    }

    pub fn from_beta(beta: Complex64) -> Result<Self> {
        finite("beta.re", beta.re)?;
        finite("beta.im", beta.im)?;
        Self::new(beta.norm(), beta.arg())
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn reduced_theta(&self) -> f64 {
        let t = self.theta.rem_euclid(TAU);
        // rem_euclid can round up to exactly 2π
        if t >= TAU {
            0.0
        } else {
            t
        }
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }

    /// The setting with β → −β.
    pub fn negated(&self) -> Self {
        Self { r: self.r, theta: self.theta + PI }
    }
}

/// Outcome of a displaced-parity measurement: `Plus` ↔ Π⁽⁺⁾, `Minus` ↔ Π⁽⁻⁾.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Plus, Parity::Minus];

    /// Observed value ±1.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Plus => 1.0,
            Parity::Minus => -1.0,
        }
    }
}

/// Initial state of the mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    /// |α⟩
    Coherent,
    /// (|α⟩ + |−α⟩)/√q(α)
    Cat,
}

impl StateKind {
    /// Period of K3 in θ.
    pub fn theta_period(self) -> f64 {
        match self {
            StateKind::Coherent => TAU,
            StateKind::Cat => PI,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StateKind::Coherent => "coherent",
            StateKind::Cat => "cat",
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One evaluation of the three correlators and K3 = C21 + C32 − C31.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LgiPoint {
    pub tau: f64,
    pub c21: f64,
    pub c32: f64,
    pub c31: f64,
    pub k3: f64,
}

impl LgiPoint {
    pub fn from_correlators(tau: f64, c21: f64, c32: f64, c31: f64) -> Self {
        Self { tau, c21, c32, c31, k3: c21 + c32 - c31 }
    }

    /// K3 above the macrorealist bound of 1.
    pub fn violates(&self) -> bool {
        self.k3 > 1.0
    }
}

/// Joint outcome probabilities of two successive displaced-parity measurements,
/// `p[first][second]` with index 0 ↔ `Plus`, 1 ↔ `Minus`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointProbs {
    pub plus_plus: f64,
    pub plus_minus: f64,
    pub minus_plus: f64,
    pub minus_minus: f64,
}

/// Rounding allowance before a probability outside `[0, 1]` counts as a bug.
pub const PROBABILITY_SLACK: f64 = 1e-10;

impl JointProbs {
    /// Clip values within [`PROBABILITY_SLACK`] of `[0, 1]`; reject the rest.
    pub fn from_table(t: [[f64; 2]; 2]) -> Result<Self> {
        Ok(Self {
            plus_plus: settle_probability("p(+,+)", t[0][0])?,
            plus_minus: settle_probability("p(+,-)", t[0][1])?,
            minus_plus: settle_probability("p(-,+)", t[1][0])?,
            minus_minus: settle_probability("p(-,-)", t[1][1])?,
        })
    }

    pub fn get(&self, first: Parity, second: Parity) -> f64 {
        match (first, second) {
            (Parity::Plus, Parity::Plus) => self.plus_plus,
            (Parity::Plus, Parity::Minus) => self.plus_minus,
            (Parity::Minus, Parity::Plus) => self.minus_plus,
            (Parity::Minus, Parity::Minus) => self.minus_minus,
        }
    }

    /// Probability of the first outcome, summed over the second.
    pub fn first_marginal(&self, first: Parity) -> f64 {
        self.get(first, Parity::Plus) + self.get(first, Parity::Minus)
    }

    pub fn total(&self) -> f64 {
        self.plus_plus + self.plus_minus + self.minus_plus + self.minus_minus
    }

    /// ⟨O_a O_b⟩ = p₊₊ − p₊₋ − p₋₊ + p₋₋.
    pub fn correlator(&self) -> f64 {
        self.plus_plus - self.plus_minus - self.minus_plus + self.minus_minus
    }
}

pub(crate) fn settle_probability(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&value) {
        return Err(LgiError::ProbabilityOutOfRange { name, value });
    }
    Ok(value.clamp(0.0, 1.0))
}

pub(crate) fn check_tau_positive(tau: f64) -> Result<f64> {
    finite("tau", tau)?;
    if tau <= 0.0 {
        return Err(LgiError::NonPositiveTau(tau));
    }
    Ok(tau)
}

pub(crate) fn check_time(what: &'static str, t: f64) -> Result<f64> {
    finite(what, t)?;
    if t < 0.0 {
        return Err(LgiError::Negative { what, value: t });
    }
    Ok(t)
}
