//! Datasets behind the fourteen figures, with each figure's own parameter
//! bindings as defaults. Flags given on the command line override them.
//!
//! | n        | state    | content                                   | Γ              |
//! |----------|----------|-------------------------------------------|----------------|
//! | 1, 8     | coh, cat | K3(τ) at β = 1/2, 0 < τ ≤ 20, Δτ = 0.01   | 0, 0.05, 0.2   |
//! | 2, 4, 5  | coherent | maximized K3, θ*, r*; 0 < τ ≤ 6.5         | 0, 0.1, 1      |
//! | 3        | coherent | θ* with the lines 2π−τ, π−τ, −τ           | 0              |
//! | 6        | coherent | f(r) = ∂K3/∂r at θ = π−τ, τ = 0.05        | 0              |
//! | 7        | coherent | g(r, τ) = K3 at θ = π−τ on a (τ, r) grid  | 0              |
//! | 9, 11, 12| cat      | as 2, 4, 5                                | 0, 0.1, 1      |
//! | 10       | cat      | θ* with the lines 5π/2−τ, 2π−τ, π−τ, π/2−τ| 0              |
//! | 13, 14   | both     | paired maximized K3, α = 1/2 and α = 1    | 0, 0.1, 1      |

use std::f64::consts::PI;

use lgi_core::optimizer::{self, SearchConfig};
use lgi_core::{ComplexAmplitude, ModeParams, StateKind};
use rayon::prelude::*;

use crate::args::FigureArgs;
use crate::commands::{optimize_table, optimum_row, sweep_table, OPTIMUM_COLUMNS, POINT_COLUMNS};
use crate::config::{self, Beta, GridSpec, RadialGrid, RunConfig, DEFAULT_ALPHA, DEFAULT_D_TAU};
use crate::error::{CliError, Result};
use crate::output::{Cell, Table};

pub const CURVE_GAMMAS: [f64; 3] = [0.0, 0.05, 0.2];
pub const OPTIMUM_GAMMAS: [f64; 3] = [0.0, 0.1, 1.0];
pub const CURVE_TAU_MAX: f64 = 20.0;
pub const CURVE_D_TAU: f64 = 0.01;
pub const OPTIMUM_TAU_MAX: f64 = 6.5;
pub const SLOPE_TAU: f64 = 0.05;
/// Central-difference step for f(r).
pub const SLOPE_STEP: f64 = 1e-5;
pub const SLOPE_R: RadialGrid = RadialGrid { r_min: 0.0, r_max: 3.0, d_r: 0.005 };
pub const SURFACE_TAU_MAX: f64 = 1.0;
pub const SURFACE_D_TAU: f64 = 0.01;
pub const SURFACE_R: RadialGrid = RadialGrid { r_min: 0.0, r_max: 10.0, d_r: 0.05 };

const FIG3_COLUMNS: [&str; 13] = [
    "tau",
    "theta_star",
    "r_star",
    "k3_star",
    "degenerate_theta",
    "theta_2pi_minus_tau",
    "theta_pi_minus_tau",
    "theta_minus_tau",
    "state",
    "alpha_re",
    "alpha_im",
    "gamma",
    "omega",
];

const FIG10_COLUMNS: [&str; 14] = [
    "tau",
    "theta_star",
    "r_star",
    "k3_star",
    "degenerate_theta",
    "theta_5pi_2_minus_tau",
    "theta_2pi_minus_tau",
    "theta_pi_minus_tau",
    "theta_pi_2_minus_tau",
    "state",
    "alpha_re",
    "alpha_im",
    "gamma",
    "omega",
];

const SLOPE_COLUMNS: [&str; 8] = ["tau", "r", "f", "theta", "alpha_re", "alpha_im", "gamma", "omega"];

const SURFACE_COLUMNS: [&str; 8] = ["tau", "r", "g", "theta", "alpha_re", "alpha_im", "gamma", "omega"];

const PAIR_COLUMNS: [&str; 12] = [
    "tau",
    "k3_star_coherent",
    "k3_star_cat",
    "coherent_minus_cat",
    "theta_star_coherent",
    "theta_star_cat",
    "r_star_coherent",
    "r_star_cat",
    "alpha_re",
    "alpha_im",
    "gamma",
    "omega",
];

/// Output table plus any per-τ optimizer failures, reported after writing.
pub struct FigureData {
    pub config: RunConfig,
    pub table: Table,
    pub failure: Option<CliError>,
}

pub fn build(args: &FigureArgs) -> Result<FigureData> {
    let n = args.n;
    let pair_alpha = match n {
        14 => 1.0,
        _ => DEFAULT_ALPHA,
    };
    let a = config::resolve_alpha(&args.alpha, pair_alpha)?;
    let omega = args.omega.unwrap_or(1.0);
    let default_gammas: &[f64] = match n {
        1 | 8 => &CURVE_GAMMAS,
        3 | 6 | 7 | 10 => &[0.0],
        _ => &OPTIMUM_GAMMAS,
    };
    let gammas = args.gammas.clone().unwrap_or_else(|| default_gammas.to_vec());
    if gammas.is_empty() {
        return Err(CliError::Usage("--gammas needs at least one value".into()));
    }
    let modes = gammas.iter().map(|&g| config::mode(omega, g)).collect::<Result<Vec<_>>>()?;

    let mut cfg = RunConfig::new("figure", args.out.format).with_mode(a, omega);
    cfg.figure = Some(n);
    cfg.gammas = gammas;
    cfg.output = args.out.output.clone();

    let kind = if n <= 7 { StateKind::Coherent } else { StateKind::Cat };
    let (table, failure) = match n {
        1 | 8 => {
            let grid = config::resolve_grid(&args.grid, None, Some(CURVE_TAU_MAX), CURVE_D_TAU)?;
            let s = config::setting(0.5, 0.0)?;
            cfg.states = vec![kind];
            cfg.beta = Some(Beta { r: s.r(), theta: s.theta() });
            cfg.grid = Some(grid);
            let mut t = Table::new(&POINT_COLUMNS);
            for p in &modes {
                t.extend(sweep_table(kind, a, &s, p, &grid.taus())?);
            }
            (t, None)
        }
        2 | 4 | 5 | 9 | 11 | 12 => {
            let grid = config::resolve_grid(&args.grid, None, Some(OPTIMUM_TAU_MAX), DEFAULT_D_TAU)?;
            cfg.states = vec![kind];
            cfg.grid = Some(grid);
            cfg.search = Some(SearchConfig::default());
            let mut t = Table::new(&OPTIMUM_COLUMNS);
            let mut errors = Vec::new();
            for p in &modes {
                let (records, err) = optimize_table(kind, a, p, &grid.sweep_grid()?);
                for rec in &records {
                    t.push(optimum_row(rec, kind, a, p));
                }
                errors.extend(err);
            }
            (t, merge(errors))
        }
        3 | 10 => {
            let grid = config::resolve_grid(&args.grid, None, Some(OPTIMUM_TAU_MAX), DEFAULT_D_TAU)?;
            cfg.states = vec![kind];
            cfg.grid = Some(grid);
            cfg.search = Some(SearchConfig::default());
            let offsets: &[f64] = if n == 3 { &[2.0 * PI, PI, 0.0] } else { &[2.5 * PI, 2.0 * PI, PI, 0.5 * PI] };
            let mut t = Table::new(if n == 3 { &FIG3_COLUMNS } else { &FIG10_COLUMNS });
            let mut errors = Vec::new();
            for p in &modes {
                let (records, err) = optimize_table(kind, a, p, &grid.sweep_grid()?);
                for rec in &records {
                    let mut row = optimum_row(rec, kind, a, p);
                    let tail = row.split_off(5);
                    row.extend(offsets.iter().map(|c| Cell::Num(c - rec.tau)));
                    row.extend(tail);
                    t.push(row);
                }
                errors.extend(err);
            }
            (t, merge(errors))
        }
        6 => {
            let tau = config::check_tau(args.tau.unwrap_or(SLOPE_TAU))?;
            cfg.states = vec![kind];
            cfg.tau = Some(tau);
            cfg.radial_grid = Some(SLOPE_R);
            cfg.fd_step = Some(SLOPE_STEP);
            (slope_table(a, &modes, tau)?, None)
        }
        7 => {
            let grid = config::resolve_grid(&args.grid, None, Some(SURFACE_TAU_MAX), SURFACE_D_TAU)?;
            cfg.states = vec![kind];
            cfg.grid = Some(grid);
            cfg.radial_grid = Some(SURFACE_R);
            (surface_table(a, &modes, &grid)?, None)
        }
        13 | 14 => {
            let grid = config::resolve_grid(&args.grid, None, Some(2.0 * PI), DEFAULT_D_TAU)?;
            cfg.states = vec![StateKind::Coherent, StateKind::Cat];
            cfg.grid = Some(grid);
            cfg.search = Some(SearchConfig::default());
            pair_table(a, &modes, &grid)?
        }
        _ => return Err(CliError::Usage(format!("unknown figure {n}; expected 1 to 14"))),
    };
    Ok(FigureData { config: cfg, table, failure })
}

fn merge(errors: Vec<CliError>) -> Option<CliError> {
    if errors.is_empty() {
        return None;
    }
    let msg: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
    Some(CliError::Numerical(msg.join(" | ")))
}

fn numerical(e: lgi_core::LgiError) -> CliError {
    CliError::Numerical(e.to_string())
}

fn slope_table(a: ComplexAmplitude, modes: &[ModeParams], tau: f64) -> Result<Table> {
    let theta = PI - tau;
    let mut t = Table::new(&SLOPE_COLUMNS);
    for p in modes {
        let rs = SLOPE_R.points();
        let fs = rs
            .par_iter()
            .map(|&r| optimizer::radial_slope(StateKind::Coherent, a, p, tau, theta, r, SLOPE_STEP))
            .collect::<lgi_core::Result<Vec<_>>>()
            .map_err(numerical)?;
        for (r, f) in rs.iter().zip(fs) {
            t.push(vec![
                tau.into(),
                (*r).into(),
                f.into(),
                theta.into(),
                a.re().into(),
                a.im().into(),
                p.gamma().into(),
                p.omega().into(),
            ]);
        }
    }
    Ok(t)
}

fn surface_table(a: ComplexAmplitude, modes: &[ModeParams], grid: &GridSpec) -> Result<Table> {
    let rs = SURFACE_R.points();
    let mut t = Table::new(&SURFACE_COLUMNS);
    for p in modes {
        let cells: Vec<(f64, f64)> = grid.taus().into_iter().flat_map(|tau| rs.iter().map(move |&r| (tau, r))).collect();
        let gs = cells
            .par_iter()
            .map(|&(tau, r)| optimizer::k3_value(StateKind::Coherent, a.value(), p, tau, PI - tau, r))
            .collect::<lgi_core::Result<Vec<_>>>()
            .map_err(numerical)?;
        for (&(tau, r), g) in cells.iter().zip(gs) {
            t.push(vec![
                tau.into(),
                r.into(),
                g.into(),
                (PI - tau).into(),
                a.re().into(),
                a.im().into(),
                p.gamma().into(),
                p.omega().into(),
            ]);
        }
    }
    Ok(t)
}

fn pair_table(a: ComplexAmplitude, modes: &[ModeParams], grid: &GridSpec) -> Result<(Table, Option<CliError>)> {
    let mut t = Table::new(&PAIR_COLUMNS);
    let mut errors = Vec::new();
    for p in modes {
        let (coh, e1) = optimize_table(StateKind::Coherent, a, p, &grid.sweep_grid()?);
        let (cat, e2) = optimize_table(StateKind::Cat, a, p, &grid.sweep_grid()?);
        errors.extend(e1);
        errors.extend(e2);
        // pair by τ; a τ missing from either side is already in `errors`
        for c in &coh {
            let Some(k) = cat.iter().find(|k| k.tau == c.tau) else { continue };
            t.push(vec![
                c.tau.into(),
                c.k3_star.into(),
                k.k3_star.into(),
                (c.k3_star - k.k3_star).into(),
                c.theta_star.into(),
                k.theta_star.into(),
                c.r_star.into(),
                k.r_star.into(),
                a.re().into(),
                a.im().into(),
                p.gamma().into(),
                p.omega().into(),
            ]);
        }
    }
    Ok((t, merge(errors)))
}
