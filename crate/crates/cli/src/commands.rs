use lgi_core::optimizer::{self, SearchConfig};
use lgi_core::{k3_cat, k3_coherent, ComplexAmplitude, LgiPoint, MeasurementSetting, ModeParams, StateKind};
use rayon::prelude::*;

use crate::args::{AuditArgs, K3Args, OptimizeArgs, SweepArgs};
use crate::audit::{self, AuditConfig};
use crate::config::{self, Beta, RunConfig, DEFAULT_ALPHA, DEFAULT_D_TAU};
use crate::error::{CliError, Result};
use crate::output::{emit, Cell, Table};

pub const POINT_COLUMNS: [&str; 13] = [
    "tau", "c21", "c32", "c31", "k3", "violates", "state", "alpha_re", "alpha_im", "gamma", "omega", "beta_r",
    "beta_theta",
];

pub const OPTIMUM_COLUMNS: [&str; 10] = [
    "tau", "theta_star", "r_star", "k3_star", "degenerate_theta", "state", "alpha_re", "alpha_im", "gamma", "omega",
];

pub fn evaluate(
    kind: StateKind,
    a: ComplexAmplitude,
    s: &MeasurementSetting,
    p: &ModeParams,
    tau: f64,
) -> lgi_core::Result<LgiPoint> {
    match kind {
        StateKind::Coherent => k3_coherent(a, s, p, tau),
        StateKind::Cat => k3_cat(a, s, p, tau),
    }
}

pub fn point_row(pt: &LgiPoint, kind: StateKind, a: ComplexAmplitude, p: &ModeParams, s: &MeasurementSetting) -> Vec<Cell> {
    vec![
        pt.tau.into(),
        pt.c21.into(),
        pt.c32.into(),
        pt.c31.into(),
        pt.k3.into(),
        pt.violates().into(),
        kind.name().into(),
        a.re().into(),
        a.im().into(),
        p.gamma().into(),
        p.omega().into(),
        s.r().into(),
        s.theta().into(),
    ]
}

pub fn optimum_row(rec: &optimizer::OptimumRecord, kind: StateKind, a: ComplexAmplitude, p: &ModeParams) -> Vec<Cell> {
    vec![
        rec.tau.into(),
        rec.theta_star.into(),
        rec.r_star.into(),
        rec.k3_star.into(),
        rec.degenerate_theta.into(),
        kind.name().into(),
        a.re().into(),
        a.im().into(),
        p.gamma().into(),
        p.omega().into(),
    ]
}

/// K3(τ) at fixed β on every τ, in parallel, returned in τ order.
pub fn sweep_table(
    kind: StateKind,
    a: ComplexAmplitude,
    s: &MeasurementSetting,
    p: &ModeParams,
    taus: &[f64],
) -> Result<Table> {
    let points = taus
        .par_iter()
        .map(|&tau| evaluate(kind, a, s, p, tau))
        .collect::<lgi_core::Result<Vec<_>>>()
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut t = Table::new(&POINT_COLUMNS);
    for pt in &points {
        t.push(point_row(pt, kind, a, p, s));
    }
    Ok(t)
}

/// Optimized records on the grid; any τ that fails is reported after the rest is kept.
pub fn optimize_table(
    kind: StateKind,
    a: ComplexAmplitude,
    p: &ModeParams,
    grid: &optimizer::SweepGrid,
) -> (Vec<optimizer::OptimumRecord>, Option<CliError>) {
    let outcome = optimizer::sweep(grid, kind, a, p);
    let err = (!outcome.failures.is_empty()).then(|| {
        let list: Vec<String> = outcome.failures.iter().map(|f| format!("tau = {}: {}", f.tau, f.error)).collect();
        CliError::Numerical(format!("optimization failed at {} grid points: {}", list.len(), list.join("; ")))
    });
    (outcome.records, err)
}

pub fn cmd_k3(args: &K3Args) -> Result<()> {
    let kind: StateKind = args.state.into();
    let a = config::resolve_alpha(&args.alpha, DEFAULT_ALPHA)?;
    let p = config::mode(args.mode.omega, args.mode.gamma)?;
    let s = config::setting(args.beta.beta_r, args.beta.beta_theta)?;
    let tau = config::check_tau(args.tau)?;

    let mut cfg = RunConfig::new("k3", args.out.format).with_mode(a, p.omega());
    cfg.states = vec![kind];
    cfg.gammas = vec![p.gamma()];
    cfg.beta = Some(Beta { r: s.r(), theta: s.theta() });
    cfg.tau = Some(tau);
    cfg.output = args.out.output.clone();

    let pt = evaluate(kind, a, &s, &p, tau).map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut t = Table::new(&POINT_COLUMNS);
    t.push(point_row(&pt, kind, a, &p, &s));
    emit(cfg.output.as_deref(), cfg.format, &cfg.provenance(), &t)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let kind: StateKind = args.state.into();
    let a = config::resolve_alpha(&args.alpha, DEFAULT_ALPHA)?;
    let p = config::mode(args.mode.omega, args.mode.gamma)?;
    let s = config::setting(args.beta.beta_r, args.beta.beta_theta)?;
    let grid = config::resolve_grid(&args.grid, None, None, DEFAULT_D_TAU)?;

    let mut cfg = RunConfig::new("sweep", args.out.format).with_mode(a, p.omega());
    cfg.states = vec![kind];
    cfg.gammas = vec![p.gamma()];
    cfg.beta = Some(Beta { r: s.r(), theta: s.theta() });
    cfg.grid = Some(grid);
    cfg.output = args.out.output.clone();

    let t = sweep_table(kind, a, &s, &p, &grid.taus())?;
    emit(cfg.output.as_deref(), cfg.format, &cfg.provenance(), &t)
}

pub fn cmd_optimize(args: &OptimizeArgs) -> Result<()> {
    let kind: StateKind = args.state.into();
    let a = config::resolve_alpha(&args.alpha, DEFAULT_ALPHA)?;
    let p = config::mode(args.mode.omega, args.mode.gamma)?;
    let grid = config::resolve_grid(&args.grid, None, None, DEFAULT_D_TAU)?;
    let mut search = SearchConfig::default();
    if let Some(n) = args.theta_points {
        search.theta_points = n;
    }
    if let Some(n) = args.r_points {
        search.r_points = n;
    }
    if search.theta_points < 4 || search.r_points < 2 {
        return Err(CliError::Usage("need --theta-points >= 4 and --r-points >= 2".into()));
    }

    let mut cfg = RunConfig::new("optimize", args.out.format).with_mode(a, p.omega());
    cfg.states = vec![kind];
    cfg.gammas = vec![p.gamma()];
    cfg.grid = Some(grid);
    cfg.search = Some(search);
    cfg.output = args.out.output.clone();

    let sweep_grid = grid.sweep_grid()?.with_search(search);
    let (records, err) = optimize_table(kind, a, &p, &sweep_grid);
    let mut t = Table::new(&OPTIMUM_COLUMNS);
    for rec in &records {
        t.push(optimum_row(rec, kind, a, &p));
    }
    emit(cfg.output.as_deref(), cfg.format, &cfg.provenance(), &t)?;
    err.map_or(Ok(()), Err)
}

pub fn cmd_oracle_audit(args: &AuditArgs) -> Result<()> {
    if args.draws == 0 {
        return Err(CliError::Usage("--draws must be at least 1".into()));
    }
    if !(args.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", args.tol)));
    }
    let kinds = match args.state {
        Some(s) => vec![s.into()],
        None => vec![StateKind::Coherent, StateKind::Cat],
    };
    let audit_cfg = AuditConfig { draws: args.draws, seed: args.seed, tol: args.tol, kinds: kinds.clone() };

    let mut cfg = RunConfig::new("oracle-audit", args.out.format);
    cfg.states = kinds;
    cfg.audit = Some(audit_cfg.settings());
    cfg.output = args.out.output.clone();

    let report = audit::run(&audit_cfg)?;
    emit(cfg.output.as_deref(), cfg.format, &cfg.provenance(), &report.table())?;
    eprintln!("{}", report.summary());
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Numerical(report.summary()))
    }
}
