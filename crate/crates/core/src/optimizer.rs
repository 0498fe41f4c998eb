//! Per-τ maximization of K3 over the displaced-parity setting (θ, r).
//!
//! A coarse (θ, r) grid supplies starting cells, the known ridge lines supply
//! a few more, and a compass pattern search polishes each one. Everything is
//! deterministic: no random restarts.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LgiError, Result};
use crate::types::{check_tau_positive, ComplexAmplitude, ModeParams, StateKind};
use crate::{lgi_cat, lgi_coherent};

/// Below this r the setting is β ≈ 0 and θ carries no information.
pub const R_TOL: f64 = 1e-6;

/// Refined optima closer than this in K3 count as ties.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumRecord {
    pub tau: f64,
    pub theta_star: f64,
    pub r_star: f64,
    pub k3_star: f64,
    pub degenerate_theta: bool,
}

/// How a single τ is searched.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub theta_points: usize,
    pub r_points: usize,
    /// r_max(τ) = max(r_floor, r_margin·√(π/(12 d))), see [`SearchConfig::r_max`].
    pub r_floor: f64,
    pub r_margin: f64,
    /// Pattern search stops once both steps fall below this.
    pub step_tol: f64,
    pub max_iterations: usize,
    /// Number of best coarse cells that get refined.
    pub top_cells: usize,
    /// Resolution of the 1-D r scan along each ridge seed.
    pub ridge_scan_points: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            theta_points: 128,
            r_points: 96,
            r_floor: 4.0,
            r_margin: 1.5,
            step_tol: 1e-6,
            max_iterations: 200_000,
            top_cells: 6,
            ridge_scan_points: 400,
        }
    }
}

impl SearchConfig {
    /// Upper end of the r range. Near τ → 0 the optimum sits on r²τ ≈ π/12;
    /// undamped K3 repeats every 2π in τ, so d is the distance from τ to the
    /// nearest multiple of 2π (including 0).
    pub fn r_max(&self, tau: f64) -> f64 {
        let wrapped = tau.rem_euclid(2.0 * PI);
        let d = wrapped.min(2.0 * PI - wrapped).max(f64::MIN_POSITIVE);
        self.r_floor.max(self.r_margin * (PI / (12.0 * d)).sqrt())
    }

    fn validate(&self) -> Result<()> {
        if self.theta_points < 4 || self.r_points < 2 {
            return Err(LgiError::InvalidGrid(format!(
                "need at least 4 theta points and 2 r points, got {} x {}",
                self.theta_points, self.r_points
            )));
        }
        if !(self.step_tol > 0.0) || !(self.r_floor > 0.0) || !(self.r_margin > 0.0) {
            return Err(LgiError::InvalidGrid("step_tol, r_floor and r_margin must be positive".into()));
        }
        Ok(())
    }
}

/// τ values n·Δτ inside [tau_min, tau_max], plus the per-τ search settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub tau_min: f64,
    pub tau_max: f64,
    pub d_tau: f64,
    pub search: SearchConfig,
}

impl SweepGrid {
    pub fn new(tau_min: f64, tau_max: f64, d_tau: f64) -> Result<Self> {
        if !(d_tau > 0.0) || !d_tau.is_finite() {
            return Err(LgiError::InvalidGrid(format!("d_tau must be positive, got {d_tau}")));
        }
        if !(tau_max >= tau_min) || !tau_min.is_finite() || !tau_max.is_finite() || tau_max <= 0.0 {
            return Err(LgiError::InvalidGrid(format!("bad tau range [{tau_min}, {tau_max}]")));
        }
        Ok(Self { tau_min, tau_max, d_tau, search: SearchConfig::default() })
    }

    pub fn with_search(mut self, search: SearchConfig) -> Self {
        self.search = search;
        self
    }

    /// Grid points τ = nΔτ > 0, ascending.
    pub fn taus(&self) -> Vec<f64> {
        let lo = ((self.tau_min / self.d_tau) - 1e-9).ceil().max(1.0) as u64;
        let hi = ((self.tau_max / self.d_tau) + 1e-9).floor() as u64;
        (lo..=hi).map(|n| n as f64 * self.d_tau).collect()
    }
}

/// K3 at one setting, dispatched on the initial state.
pub fn k3_value(kind: StateKind, a: Complex64, p: &ModeParams, tau: f64, theta: f64, r: f64) -> Result<f64> {
    let beta = Complex64::from_polar(r, theta);
    let pt = match kind {
        StateKind::Coherent => lgi_coherent::k3_unchecked(a, beta, p, tau)?,
        StateKind::Cat => lgi_cat::k3_unchecked(a, beta, p, tau)?,
    };
    Ok(pt.k3)
}

/// θ lines along which K3 is stationary in θ (undamped), used as extra seeds.
pub fn ridge_seeds(kind: StateKind, tau: f64) -> [f64; 2] {
    match kind {
        StateKind::Coherent => [PI - tau, -tau],
        StateKind::Cat => [PI / 2.0 - tau, PI - tau],
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    k3: f64,
    theta: f64,
    r: f64,
}

fn normalize(theta: f64, r: f64) -> (f64, f64) {
    if r < 0.0 {
        (theta + PI, -r)
    } else {
        (theta, r)
    }
}

fn pattern_search<F>(f: &F, start: Candidate, steps: (f64, f64), cfg: &SearchConfig, tau: f64) -> Result<Candidate>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let mut best = start;
    let (mut ht, mut hr) = steps;
    let mut iterations = 0;
    while ht >= cfg.step_tol || hr >= cfg.step_tol {
        iterations += 1;
        if iterations > cfg.max_iterations {
            return Err(LgiError::NonConvergence { tau, iterations: cfg.max_iterations });
        }
        let mut moved = false;
        for (dt, dr) in [(ht, 0.0), (-ht, 0.0), (0.0, hr), (0.0, -hr)] {
            let (theta, r) = normalize(best.theta + dt, best.r + dr);
            let k3 = f(theta, r)?;
            if k3 > best.k3 {
                best = Candidate { k3, theta, r };
                moved = true;
                break;
            }
        }
        if !moved {
            ht *= 0.5;
            hr *= 0.5;
        }
    }
    Ok(best)
}

fn report_theta(kind: StateKind, theta: f64) -> f64 {
    match kind {
        StateKind::Coherent => {
            let t = theta.rem_euclid(2.0 * PI);
            if t > PI {
                t - 2.0 * PI
            } else {
                t
            }
        }
        StateKind::Cat => {
            let t = theta.rem_euclid(PI);
            if t >= PI {
                0.0
            } else {
                t
            }
        }
    }
}

/// Maximize K3 over (θ, r) at one τ.
pub fn optimize_at(
    tau: f64,
    kind: StateKind,
    a: ComplexAmplitude,
    p: &ModeParams,
    cfg: &SearchConfig,
) -> Result<OptimumRecord> {
    check_tau_positive(tau)?;
    cfg.validate()?;
    let alpha = a.value();
    let f = |theta: f64, r: f64| k3_value(kind, alpha, p, tau, theta, r);
    let period = kind.theta_period();
    let r_max = cfg.r_max(tau);
    let ht = period / cfg.theta_points as f64;
    let hr = r_max / (cfg.r_points - 1) as f64;

    let mut cells = (0..cfg.theta_points * cfg.r_points)
        .into_par_iter()
        .map(|idx| {
            let theta = (idx / cfg.r_points) as f64 * ht;
            let r = (idx % cfg.r_points) as f64 * hr;
            Ok(Candidate { k3: f(theta, r)?, theta, r })
        })
        .collect::<Result<Vec<_>>>()?;
    // stable sort keeps the enumeration order among equal values
    cells.sort_by(|x, y| y.k3.total_cmp(&x.k3));
    let grid_best = cells[0].k3;
    let mut seeds: Vec<Candidate> = cells.into_iter().take(cfg.top_cells.max(1)).collect();

    let dr = r_max / (cfg.ridge_scan_points.max(2) - 1) as f64;
    for theta in ridge_seeds(kind, tau) {
        let mut best: Option<Candidate> = None;
        for j in 0..cfg.ridge_scan_points.max(2) {
            let r = j as f64 * dr;
            let k3 = f(theta, r)?;
            if best.is_none_or(|b| k3 > b.k3) {
                best = Some(Candidate { k3, theta, r });
            }
        }
        seeds.extend(best);
    }

    let refined = seeds
        .par_iter()
        .map(|s| pattern_search(&f, *s, (ht, hr), cfg, tau))
        .collect::<Result<Vec<_>>>()?;

    let top = refined.iter().map(|c| c.k3).fold(grid_best, f64::max);
    let winner = refined
        .iter()
        .filter(|c| c.k3 >= top - TIE_TOL)
        .min_by(|x, y| {
            x.r.total_cmp(&y.r)
                .then(x.theta.rem_euclid(period).total_cmp(&y.theta.rem_euclid(period)))
        })
        .copied()
        .expect("the best refined point is always within the tie window");

    let degenerate = winner.r < R_TOL;
    Ok(OptimumRecord {
        tau,
        theta_star: if degenerate { 0.0 } else { report_theta(kind, winner.theta) },
        r_star: winner.r,
        k3_star: winner.k3,
        degenerate_theta: degenerate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepFailure {
    pub tau: f64,
    pub error: LgiError,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepOutcome {
    pub records: Vec<OptimumRecord>,
    pub failures: Vec<SweepFailure>,
}

/// [`optimize_at`] on every grid τ, in parallel; failures are collected, not fatal.
pub fn sweep(grid: &SweepGrid, kind: StateKind, a: ComplexAmplitude, p: &ModeParams) -> SweepOutcome {
    let results: Vec<(f64, Result<OptimumRecord>)> = grid
        .taus()
        .into_par_iter()
        .map(|tau| (tau, optimize_at(tau, kind, a, p, &grid.search)))
        .collect();
    let mut out = SweepOutcome::default();
    for (tau, r) in results {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(error) => out.failures.push(SweepFailure { tau, error }),
        }
    }
    out
}

/// r*²τ/(π/12) at the undamped optimum (ω = 1) for each small τ.
pub fn singularity_probe(taus: &[f64], kind: StateKind, a: ComplexAmplitude) -> Result<Vec<(f64, f64)>> {
    if let Some(&bad) = taus.iter().find(|&&t| !(t > 0.0 && t <= 0.01)) {
        return Err(LgiError::InvalidGrid(format!("probe tau must lie in (0, 0.01], got {bad}")));
    }
    let p = ModeParams::new(1.0, 0.0)?;
    let cfg = SearchConfig::default();
    taus.par_iter()
        .map(|&tau| {
            let rec = optimize_at(tau, kind, a, &p, &cfg)?;
            Ok((tau, rec.r_star * rec.r_star * tau / (PI / 12.0)))
        })
        .collect()
}

/// f(r) = ∂K3/∂r at fixed θ by central difference with step h.
pub fn radial_slope(
    kind: StateKind,
    a: ComplexAmplitude,
    p: &ModeParams,
    tau: f64,
    theta: f64,
    r: f64,
    h: f64,
) -> Result<f64> {
    check_tau_positive(tau)?;
    let alpha = a.value();
    let up = k3_value(kind, alpha, p, tau, theta, r + h)?;
    let down = k3_value(kind, alpha, p, tau, theta, r - h)?;
    Ok((up - down) / (2.0 * h))
}

/// Bisection for a sign change of [`radial_slope`] in [lo, hi].
#[allow(clippy::too_many_arguments)]
pub fn radial_slope_root(
    kind: StateKind,
    a: ComplexAmplitude,
    p: &ModeParams,
    tau: f64,
    theta: f64,
    (mut lo, mut hi): (f64, f64),
    h: f64,
) -> Result<f64> {
    let f = |r| radial_slope(kind, a, p, tau, theta, r, h);
    let mut f_lo = f(lo)?;
    if f_lo.signum() == f(hi)?.signum() {
        return Err(LgiError::InvalidGrid(format!("f(r) has no sign change on [{lo}, {hi}]")));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn half() -> ComplexAmplitude {
        ComplexAmplitude::real(0.5).unwrap()
    }

    #[test]
    fn grid_taus() {
        let g = SweepGrid::new(0.0, 6.5, 0.025).unwrap();
        let t = g.taus();
        assert_eq!(t.len(), 260);
        assert_abs_diff_eq!(t[0], 0.025, epsilon = 1e-15);
        assert_abs_diff_eq!(*t.last().unwrap(), 6.5, epsilon = 1e-12);
        assert!(SweepGrid::new(0.1, 1.0, 0.0).is_err());
        assert!(SweepGrid::new(1.0, 0.5, 0.1).is_err());
    }

    #[test]
    fn r_max_policy() {
        let c = SearchConfig::default();
        assert_eq!(c.r_max(1.0), 4.0);
        assert_abs_diff_eq!(c.r_max(0.001), 1.5 * (PI / 0.012).sqrt(), epsilon = 1e-12);
        assert!(c.r_max(2.0 * PI - 0.001) > 20.0);
    }

    #[test]
    fn theta_reporting_ranges() {
        assert_abs_diff_eq!(report_theta(StateKind::Coherent, -0.3), -0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(report_theta(StateKind::Coherent, 2.0 * PI - 0.3), -0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(report_theta(StateKind::Coherent, PI), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(report_theta(StateKind::Cat, -0.3), PI - 0.3, epsilon = 1e-12);
    }

    #[test]
    fn negative_radius_flips_direction() {
        let (t, r) = normalize(0.2, -0.5);
        assert_abs_diff_eq!(t, 0.2 + PI, epsilon = 1e-15);
        assert_eq!(r, 0.5);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = ModeParams::new(1.0, 0.0).unwrap();
        let cfg = SearchConfig::default();
        assert!(optimize_at(0.0, StateKind::Coherent, half(), &p, &cfg).is_err());
        let tiny = SearchConfig { theta_points: 2, ..cfg };
        assert!(matches!(optimize_at(0.5, StateKind::Cat, half(), &p, &tiny), Err(LgiError::InvalidGrid(_))));
        assert!(singularity_probe(&[0.02], StateKind::Cat, half()).is_err());
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let p = ModeParams::new(1.0, 0.0).unwrap();
        let cfg = SearchConfig { max_iterations: 3, ..SearchConfig::default() };
        assert!(matches!(
            optimize_at(0.5, StateKind::Coherent, half(), &p, &cfg),
            Err(LgiError::NonConvergence { .. })
        ));
    }

    #[test]
    fn coherent_flat_window_is_degenerate() {
        let p = ModeParams::new(1.0, 0.0).unwrap();
        let rec = optimize_at(3.0, StateKind::Coherent, half(), &p, &SearchConfig::default()).unwrap();
        assert!(rec.degenerate_theta);
        assert!(rec.r_star < R_TOL);
        assert_eq!(rec.theta_star, 0.0);
        assert_abs_diff_eq!(rec.k3_star, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn coherent_optimum_on_ridge() {
        let p = ModeParams::new(1.0, 0.0).unwrap();
        let rec = optimize_at(0.05, StateKind::Coherent, half(), &p, &SearchConfig::default()).unwrap();
        assert_abs_diff_eq!(rec.theta_star, PI - 0.05, epsilon = 1e-5);
        assert_abs_diff_eq!(rec.r_star, 1.989_01, epsilon = 1e-4);
        assert_abs_diff_eq!(rec.k3_star, 1.441_832_619, epsilon = 1e-8);
    }

    #[test]
    fn radial_root_matches_optimum() {
        let p = ModeParams::new(1.0, 0.0).unwrap();
        let tau = 0.05;
        let root =
            radial_slope_root(StateKind::Coherent, half(), &p, tau, PI - tau, (1.5, 2.5), 1e-5).unwrap();
        assert_abs_diff_eq!(root, 1.989_01, epsilon = 1e-4);
        assert!(radial_slope_root(StateKind::Coherent, half(), &p, tau, PI - tau, (1.0, 1.5), 1e-5).is_err());
    }

    #[test]
    fn optimum_dominates_grid_probes() {
        let p = ModeParams::new(1.0, 0.1).unwrap();
        let cfg = SearchConfig { theta_points: 32, r_points: 24, ..SearchConfig::default() };
        let tau = 0.4;
        let rec = optimize_at(tau, StateKind::Cat, half(), &p, &cfg).unwrap();
        let r_max = cfg.r_max(tau);
        for i in 0..32 {
            for j in 0..24 {
                let v = k3_value(StateKind::Cat, half().value(), &p, tau, i as f64 * PI / 32.0, j as f64 * r_max / 23.0)
                    .unwrap();
                assert!(rec.k3_star >= v - TIE_TOL);
            }
        }
    }

    #[test]
    fn sweep_is_ordered_and_deterministic() {
        let p = ModeParams::new(1.0, 0.0).unwrap();
        let cfg = SearchConfig { theta_points: 32, r_points: 24, ..SearchConfig::default() };
        let g = SweepGrid::new(0.2, 0.6, 0.1).unwrap().with_search(cfg);
        let a = sweep(&g, StateKind::Coherent, half(), &p);
        let b = sweep(&g, StateKind::Coherent, half(), &p);
        assert!(a.failures.is_empty());
        assert_eq!(a, b);
        assert!(a.records.windows(2).all(|w| w[0].tau < w[1].tau));
    }
}
