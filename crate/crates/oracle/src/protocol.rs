//! The three-time measurement protocol done with explicit matrices:
//! project, propagate, project, propagate, project, carrying unnormalized
//! branches so that every trace is directly a joint probability.

use lgi_core::{ComplexAmplitude, LgiPoint, MeasurementSetting, ModeParams, Parity, StateKind};
use num_complex::Complex64;

use crate::dynamics::evolve;
use crate::error::{OracleError, Result};
use crate::fock::{coherent_vector, cutoff_for, FockOperator};
use crate::parity::displaced_parity_pair;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrator {
    /// Exact terminating series in the truncated basis.
    Series,
    /// Fixed-step RK4 on the master equation.
    Rk4 { dt: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// `None` picks the cutoff per call from the amplitudes involved.
    pub n_max: Option<usize>,
    pub trunc_tol: f64,
    pub integrator: Integrator,
}

/// Shift in K3 above which halving the RK4 step raises a warning.
pub const STEP_SHIFT_TOL: f64 = 1e-8;

impl Default for OracleConfig {
    fn default() -> Self {
        Self { n_max: None, trunc_tol: 1e-10, integrator: Integrator::Series }
    }
}

impl OracleConfig {
    pub fn fixed(n_max: usize) -> Self {
        Self { n_max: Some(n_max), ..Self::default() }
    }

    pub fn rk4(n_max: usize, dt: f64) -> Self {
        Self { n_max: Some(n_max), integrator: Integrator::Rk4 { dt }, ..Self::default() }
    }

    /// Cutoff used for a given initial amplitude and |β|.
    ///
    /// Labels reached by the protocol have modulus at most 2r + |α|, and
    /// D(β) must act faithfully on them, so the Poisson tail at 3r + |α| is
    /// kept below `trunc_tol`.
    pub fn cutoff(&self, alpha: f64, r: f64) -> usize {
        self.n_max.unwrap_or_else(|| cutoff_for(3.0 * r + alpha, self.trunc_tol).max(16))
    }

    fn validate(&self) -> Result<()> {
        if !(self.trunc_tol > 0.0) {
            return Err(OracleError::InvalidConfig("trunc_tol must be positive".into()));
        }
        if matches!(self.n_max, Some(n) if n < 1) {
            return Err(OracleError::InvalidConfig("n_max must be at least 1".into()));
        }
        if let Integrator::Rk4 { dt } = self.integrator {
            if !(dt > 0.0) {
                return Err(OracleError::InvalidConfig("dt must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleWarning {
    /// Halving the RK4 step moved K3 by `shift`.
    StepSize { dt: f64, shift: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub point: LgiPoint,
    pub n_max: usize,
    /// Σ over all eight outcome triples of the three-measurement tree.
    pub tree_weight: f64,
    pub warnings: Vec<OracleWarning>,
}

/// Initial density matrix. The cat is normalized numerically.
pub fn initial_state(kind: StateKind, a: Complex64, n_max: usize, trunc_tol: f64) -> Result<FockOperator> {
    let v = coherent_vector(a, n_max, trunc_tol)?.entries;
    let psi = match kind {
        StateKind::Coherent => v,
        StateKind::Cat => {
            let s = &v + coherent_vector(-a, n_max, trunc_tol)?.entries;
            let norm = s.norm();
            s / Complex64::new(norm, 0.0)
        }
    };
    Ok(FockOperator::new(&psi * psi.adjoint()))
}

struct Run<'a> {
    pi: [FockOperator; 2],
    p: &'a ModeParams,
    integrator: Integrator,
}

impl Run<'_> {
    fn evolve(&self, rho: &FockOperator, t: f64) -> FockOperator {
        evolve(rho, self.p, t, self.integrator)
    }

    fn prob(&self, w: &FockOperator, parity: usize) -> f64 {
        self.pi[parity].trace_product(w).re
    }

    /// Returns (C21, C31, C32, tree weight).
    fn correlators(&self, rho0: &FockOperator, tau: f64) -> (f64, f64, f64, f64) {
        let sign = |i: usize| if i == 0 { 1.0 } else { -1.0 };
        let (mut c21, mut c31, mut c32, mut tree) = (0.0, 0.0, 0.0, 0.0);
        for i in 0..2 {
            let w1 = self.pi[i].sandwich(rho0);
            let w2 = self.evolve(&w1, tau);
            let w3 = self.evolve(&w2, tau);
            for j in 0..2 {
                c21 += sign(i) * sign(j) * self.prob(&w2, j);
                c31 += sign(i) * sign(j) * self.prob(&w3, j);
                let w12 = self.evolve(&self.pi[j].sandwich(&w2), tau);
                tree += (0..2).map(|k| self.prob(&w12, k)).sum::<f64>();
            }
        }
        let rho2 = self.evolve(rho0, tau);
        for j in 0..2 {
            let w = self.evolve(&self.pi[j].sandwich(&rho2), tau);
            for k in 0..2 {
                c32 += sign(j) * sign(k) * self.prob(&w, k);
            }
        }
        (c21, c31, c32, tree)
    }
}

/// K3 by brute force in the truncated number basis.
pub fn k3_oracle(
    kind: StateKind,
    a: ComplexAmplitude,
    s: &MeasurementSetting,
    p: &ModeParams,
    tau: f64,
    cfg: &OracleConfig,
) -> Result<OracleReport> {
    cfg.validate()?;
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(lgi_core::LgiError::NonPositiveTau(tau).into());
    }
    let n_max = cfg.cutoff(a.norm(), s.r());
    let rho0 = initial_state(kind, a.value(), n_max, cfg.trunc_tol)?;
    let pi = displaced_parity_pair(s, n_max, cfg.trunc_tol)?;
    let run = Run { pi, p, integrator: cfg.integrator };
    let (c21, c31, c32, tree) = run.correlators(&rho0, tau);
    let point = LgiPoint::from_correlators(tau, c21, c32, c31);

    let mut warnings = Vec::new();
    if let Integrator::Rk4 { dt } = cfg.integrator {
        let fine = Run { integrator: Integrator::Rk4 { dt: 0.5 * dt }, ..run };
        let (f21, f31, f32, _) = fine.correlators(&rho0, tau);
        let shift = (f21 + f32 - f31 - point.k3).abs();
        if shift > STEP_SHIFT_TOL {
            warnings.push(OracleWarning::StepSize { dt, shift });
        }
    }
    Ok(OracleReport { point, n_max, tree_weight: tree, warnings })
}

/// Joint probabilities p(1±, 2±) from matrices, for spot checks of the closed forms.
pub fn joint_probs_oracle(
    kind: StateKind,
    a: ComplexAmplitude,
    s: &MeasurementSetting,
    p: &ModeParams,
    tau: f64,
    cfg: &OracleConfig,
) -> Result<[[f64; 2]; 2]> {
    cfg.validate()?;
    let n_max = cfg.cutoff(a.norm(), s.r());
    let rho0 = initial_state(kind, a.value(), n_max, cfg.trunc_tol)?;
    let pi = displaced_parity_pair(s, n_max, cfg.trunc_tol)?;
    let run = Run { pi, p, integrator: cfg.integrator };
    Ok(Parity::BOTH.map(|first| {
        let i = first as usize;
        let w = run.evolve(&run.pi[i].sandwich(&rho0), tau);
        [run.prob(&w, 0), run.prob(&w, 1)]
    }))
}
