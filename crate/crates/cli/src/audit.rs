//! Randomized comparison of the closed forms against the Fock-space solver.
//!
//! Draws cover |α| ≤ 1.5, r ≤ 3, Γ ∈ [0, 1], τ ∈ (0, 2π] with ω = 1. Each
//! point is also re-solved with 16 more basis states to show the cutoff has
//! converged.

use std::f64::consts::TAU;

use lgi_core::{ComplexAmplitude, MeasurementSetting, ModeParams, StateKind};
use lgi_oracle::{k3_oracle, OracleConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::commands::evaluate;
use crate::config::AuditSettings;
use crate::error::{CliError, Result};
use crate::output::{Cell, Table};

pub const MAX_ALPHA: f64 = 1.5;
pub const MAX_R: f64 = 3.0;
pub const MAX_GAMMA: f64 = 1.0;
/// Extra basis states for the cutoff-stability re-solve.
pub const CUTOFF_MARGIN: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct AuditConfig {
    pub draws: usize,
    pub seed: u64,
    pub tol: f64,
    pub kinds: Vec<StateKind>,
}

impl AuditConfig {
    pub fn settings(&self) -> AuditSettings {
        AuditSettings { draws: self.draws, seed: self.seed, tol: self.tol, trunc_tol: OracleConfig::default().trunc_tol }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub alpha: ComplexAmplitude,
    pub setting: MeasurementSetting,
    pub mode: ModeParams,
    pub tau: f64,
}

/// The same seed gives the same draws regardless of thread count.
pub fn draws(n: usize, seed: u64) -> Vec<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let alpha = ComplexAmplitude::polar(rng.gen_range(0.0..=MAX_ALPHA), rng.gen_range(0.0..TAU)).unwrap();
            let setting = MeasurementSetting::new(rng.gen_range(0.0..=MAX_R), rng.gen_range(0.0..TAU)).unwrap();
            let mode = ModeParams::new(1.0, rng.gen_range(0.0..=MAX_GAMMA)).unwrap();
            // 2π − [0, 2π) lands in (0, 2π]
            let tau = TAU - rng.gen_range(0.0..TAU);
            Draw { alpha, setting, mode, tau }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditPoint {
    pub kind: StateKind,
    pub draw: Draw,
    pub closed: f64,
    pub oracle: f64,
    pub n_max: usize,
    /// |oracle(n_max) − oracle(n_max + 16)|
    pub cutoff_shift: f64,
}

impl AuditPoint {
    pub fn disagreement(&self) -> f64 {
        (self.closed - self.oracle).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub points: Vec<AuditPoint>,
    pub tol: f64,
}

impl AuditReport {
    pub fn max_disagreement(&self) -> f64 {
        self.points.iter().map(AuditPoint::disagreement).fold(0.0, f64::max)
    }

    pub fn max_cutoff_shift(&self) -> f64 {
        self.points.iter().map(|p| p.cutoff_shift).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_disagreement() < self.tol && self.max_cutoff_shift() < self.tol
    }

    pub fn summary(&self) -> String {
        format!(
            "oracle audit: {} points, max |closed - oracle| = {:.3e}, max cutoff shift = {:.3e}, tol = {:e}: {}",
            self.points.len(),
            self.max_disagreement(),
            self.max_cutoff_shift(),
            self.tol,
            if self.passed() { "ok" } else { "DISAGREEMENT" }
        )
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "tau",
            "k3_closed",
            "k3_oracle",
            "abs_diff",
            "cutoff_shift",
            "n_max",
            "state",
            "alpha_re",
            "alpha_im",
            "gamma",
            "omega",
            "beta_r",
            "beta_theta",
        ]);
        for p in &self.points {
            let d = &p.draw;
            t.push(vec![
                d.tau.into(),
                p.closed.into(),
                p.oracle.into(),
                p.disagreement().into(),
                p.cutoff_shift.into(),
                p.n_max.into(),
                Cell::from(p.kind.name()),
                d.alpha.re().into(),
                d.alpha.im().into(),
                d.mode.gamma().into(),
                d.mode.omega().into(),
                d.setting.r().into(),
                d.setting.theta().into(),
            ]);
        }
        t
    }
}

fn audit_point(kind: StateKind, d: &Draw) -> Result<AuditPoint> {
    let closed = evaluate(kind, d.alpha, &d.setting, &d.mode, d.tau).map_err(|e| CliError::Numerical(e.to_string()))?;
    let rep = k3_oracle(kind, d.alpha, &d.setting, &d.mode, d.tau, &OracleConfig::default())?;
    let wider = k3_oracle(kind, d.alpha, &d.setting, &d.mode, d.tau, &OracleConfig::fixed(rep.n_max + CUTOFF_MARGIN))?;
    Ok(AuditPoint {
        kind,
        draw: *d,
        closed: closed.k3,
        oracle: rep.point.k3,
        n_max: rep.n_max,
        cutoff_shift: (rep.point.k3 - wider.point.k3).abs(),
    })
}

/// Points are ordered draw-major, then by state kind.
pub fn run(cfg: &AuditConfig) -> Result<AuditReport> {
    let jobs: Vec<(StateKind, Draw)> =
        draws(cfg.draws, cfg.seed).into_iter().flat_map(|d| cfg.kinds.iter().map(move |&k| (k, d))).collect();
    let points = jobs.par_iter().map(|(k, d)| audit_point(*k, d)).collect::<Result<Vec<_>>>()?;
    Ok(AuditReport { points, tol: cfg.tol })
}
