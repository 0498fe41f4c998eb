//! K3 for a mode prepared in the coherent state |α⟩.
//!
//! C21 is the two-step correlator C(α, τ). Because the first measurement
//! happens on |α⟩ itself, the later correlators follow by relabeling:
//! C31 = C(α, 2τ) and C32 = C(αe^{−iΩτ}, τ).

use num_complex::Complex64;

use crate::coherent_algebra::DyadState;
use crate::error::Result;
use crate::types::{
    check_tau_positive, check_time, ComplexAmplitude, JointProbs, LgiPoint, MeasurementSetting,
    ModeParams,
};

/// Joint probabilities of measuring Π(β) on |α⟩ at t = 0 and again at t = τ.
pub fn joint_probs_step(
    a: ComplexAmplitude,
    s: &MeasurementSetting,
    p: &ModeParams,
    tau: f64,
) -> Result<JointProbs> {
    check_time("tau", tau)?;
    step(a.value(), s.beta(), p, tau)
}

/// C(α, β, ω, Γ, τ).
pub fn correlator(a: ComplexAmplitude, s: &MeasurementSetting, p: &ModeParams, tau: f64) -> Result<f64> {
    Ok(joint_probs_step(a, s, p, tau)?.correlator())
}

pub fn k3_coherent(
    a: ComplexAmplitude,
    s: &MeasurementSetting,
    p: &ModeParams,
    tau: f64,
) -> Result<LgiPoint> {
    check_tau_positive(tau)?;
    k3_unchecked(a.value(), s.beta(), p, tau)
}

fn step(a: Complex64, beta: Complex64, p: &ModeParams, tau: f64) -> Result<JointProbs> {
    JointProbs::from_table(DyadState::coherent(a).sequential_table(beta, p, tau))
}

pub(crate) fn k3_unchecked(a: Complex64, beta: Complex64, p: &ModeParams, tau: f64) -> Result<LgiPoint> {
    let c21 = step(a, beta, p, tau)?.correlator();
    let c31 = step(a, beta, p, 2.0 * tau)?.correlator();
    let c32 = step(a * p.label_factor(tau), beta, p, tau)?.correlator();
    Ok(LgiPoint::from_correlators(tau, c21, c32, c31))
}
