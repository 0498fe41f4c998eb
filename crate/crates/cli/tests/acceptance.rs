//! Acceptance criteria, one test each. Every test prints a single
//! `[PASS]`/`[FAIL]` line straight to stderr, so the lines show up even when
//! the harness captures output.
//!
//! Run with `cargo test -p lgi-cli --test acceptance`.

use std::f64::consts::{E, PI, TAU};
use std::io::Write;
use std::time::{Duration, Instant};

use lgi_cli::audit::{self, AuditConfig};
use lgi_core::asymptotics::{scaled_limit_function, PEAK_X};
use lgi_core::lgi_cat::{cat_joint_probs_first, cat_joint_probs_second};
use lgi_core::lgi_coherent::joint_probs_step;
use lgi_core::optimizer::{
    optimize_at, radial_slope, radial_slope_root, singularity_probe, sweep, OptimumRecord, SearchConfig, SweepGrid,
};
use lgi_core::{k3_cat, k3_coherent, ComplexAmplitude, LgiPoint, MeasurementSetting, ModeParams, StateKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, title: &str, pass: bool, detail: &str) {
    let line = format!("[{}] criterion {id:>2} {title}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(pass, "criterion {id} ({title}) failed: {detail}");
}

fn half() -> ComplexAmplitude {
    ComplexAmplitude::real(0.5).unwrap()
}

fn undamped() -> ModeParams {
    ModeParams::new(1.0, 0.0).unwrap()
}

fn k3(kind: StateKind, a: ComplexAmplitude, s: &MeasurementSetting, p: &ModeParams, tau: f64) -> LgiPoint {
    match kind {
        StateKind::Coherent => k3_coherent(a, s, p, tau).unwrap(),
        StateKind::Cat => k3_cat(a, s, p, tau).unwrap(),
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

#[test]
fn criterion_01_coherent_long_time_limit() {
    let s = MeasurementSetting::new(0.5, 0.0).unwrap();
    let p = ModeParams::new(1.0, 0.2).unwrap();
    let start = Instant::now();
    let pt = k3_coherent(half(), &s, &p, 50.0).unwrap();
    let elapsed = start.elapsed();
    let err = (pt.k3 - 0.367879).abs();
    let pass = err <= 1e-4 && elapsed < Duration::from_millis(1);
    report(
        1,
        "coherent tau -> inf limit",
        pass,
        &format!("K3(tau=50) = {:.9}, |err| = {err:.2e} (tol 1e-4), runtime {:.4} ms (< 1 ms)", pt.k3, ms(elapsed)),
    );
}

#[test]
fn criterion_02_cat_long_time_limit() {
    let s = MeasurementSetting::new(0.5, 0.0).unwrap();
    let p = ModeParams::new(1.0, 0.2).unwrap();
    let pt = k3_cat(half(), &s, &p, 60.0).unwrap();
    let sqrt_e = E.sqrt();
    let target = (1.0 + 2.0 * sqrt_e + 5.0 * E) / (4.0 * E.powf(1.5) * (1.0 + sqrt_e));
    let err = (pt.k3 - target).abs();
    // At τ → ∞ both measurements act on the vacuum, so K3 → e^{-4r²} = 1/e here.
    // The Fock-space solver agrees with the closed form at τ = 60, so the
    // printed target is not reachable by any faithful evaluation.
    report(
        2,
        "cat tau -> inf limit",
        err <= 1e-4,
        &format!(
            "K3(tau=60) = {:.9}, target {target:.9}, |err| = {err:.2e} (tol 1e-4); exp(-4r^2) = {:.9}",
            pt.k3,
            (-1.0f64).exp()
        ),
    );
}

fn singular_maximum(id: u32, kind: StateKind, expected: f64) {
    let start = Instant::now();
    let rec = optimize_at(0.001, kind, half(), &undamped(), &SearchConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let err = (rec.k3_star - expected).abs();
    let mut pass = err <= 5e-4;
    let mut detail = format!(
        "k3* = {:.8} at r* = {:.4}, theta* = {:.5}, |err| = {err:.2e} (tol 5e-4), runtime {:.2} s",
        rec.k3_star,
        rec.r_star,
        rec.theta_star,
        elapsed.as_secs_f64()
    );
    if kind == StateKind::Coherent {
        pass &= elapsed < Duration::from_secs(30);
        detail.push_str(" (< 30 s)");
    }
    report(id, &format!("singular maximum, {kind}"), pass, &detail);
}

#[test]
fn criterion_03_singular_maximum_coherent() {
    singular_maximum(3, StateKind::Coherent, 1.49848);
}

#[test]
fn criterion_04_singular_maximum_cat() {
    singular_maximum(4, StateKind::Cat, 1.49902);
}

#[test]
fn criterion_05_const_ratios() {
    let taus: Vec<f64> = (1..=8).map(|n| 0.001 * n as f64).collect();
    let mut pass = true;
    let mut detail = Vec::new();
    for (kind, lo, hi) in [(StateKind::Coherent, 0.9068 - 0.005, 0.9683 + 0.005), (StateKind::Cat, 0.9934 - 0.003, 0.9991 + 0.003)]
    {
        let probe = singularity_probe(&taus, kind, half()).unwrap();
        let ratios: Vec<f64> = probe.iter().map(|&(_, c)| c).collect();
        let in_range = ratios.iter().all(|c| (lo..=hi).contains(c));
        // increasing toward 1 as τ decreases: strictly decreasing in n
        let monotone = ratios.windows(2).all(|w| w[1] < w[0]);
        pass &= in_range && monotone;
        let shown: Vec<String> = ratios.iter().map(|c| format!("{c:.6}")).collect();
        detail.push(format!(
            "{kind} [{}] in [{lo:.4}, {hi:.4}]: {in_range}, monotone: {monotone}",
            shown.join(", ")
        ));
    }
    report(5, "const ratios r*^2 tau/(pi/12)", pass, &detail.join("; "));
}

#[test]
fn criterion_06_radial_slope_root() {
    let tau = 0.05;
    let theta = PI - tau;
    let p = undamped();
    let h = 1e-5;
    // first sign change of f away from the trivial root at r = 0
    let step = 0.005;
    let mut lo = 0.1;
    let mut f_lo = radial_slope(StateKind::Coherent, half(), &p, tau, theta, lo, h).unwrap();
    let mut bracket = None;
    while lo < 3.0 {
        let hi = lo + step;
        let f_hi = radial_slope(StateKind::Coherent, half(), &p, tau, theta, hi, h).unwrap();
        if f_lo.signum() != f_hi.signum() {
            bracket = Some((lo, hi));
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    let Some(bracket) = bracket else {
        report(6, "f(r) root", false, "no sign change of f(r) on (0.1, 3]");
        return;
    };
    let root = radial_slope_root(StateKind::Coherent, half(), &p, tau, theta, bracket, h).unwrap();
    let err = (root - 1.98901).abs();
    report(6, "f(r) root", err <= 1e-3, &format!("sign change at r = {root:.6}, |err| = {err:.2e} (tol 1e-3)"));
}

fn records(a: ComplexAmplitude, kind: StateKind, tau_max: f64) -> Vec<OptimumRecord> {
    let grid = SweepGrid::new(0.025, tau_max, 0.025).unwrap();
    let out = sweep(&grid, kind, a, &undamped());
    assert!(out.failures.is_empty(), "{:?}", out.failures);
    out.records
}

/// Grid points violating "coherent > cat on [lo, hi]" or "coherent < cat below lo".
fn crossover_violations(a: ComplexAmplitude, lo: f64, hi: f64) -> (Vec<String>, f64) {
    let coh = records(a, StateKind::Coherent, hi);
    let cat = records(a, StateKind::Cat, hi);
    let mut bad = Vec::new();
    let mut margin = f64::INFINITY;
    for (c, k) in coh.iter().zip(&cat) {
        assert_eq!(c.tau, k.tau);
        let d = c.k3_star - k.k3_star;
        let ok = if c.tau < lo - 1e-9 { d < 0.0 } else { d > 0.0 };
        margin = margin.min(d.abs());
        if !ok {
            bad.push(format!("tau={:.3} diff={d:+.3e}", c.tau));
        }
    }
    (bad, margin)
}

#[test]
fn criterion_07_crossover() {
    let start = Instant::now();
    let (bad_half, m_half) = crossover_violations(half(), 0.175, 2.125);
    let (bad_one, m_one) = crossover_violations(ComplexAmplitude::real(1.0).unwrap(), 0.1, 2.55);
    let elapsed = start.elapsed();
    let pass = bad_half.is_empty() && bad_one.is_empty() && elapsed < Duration::from_secs(600);
    report(
        7,
        "coherent/cat crossover",
        pass,
        &format!(
            "alpha=1/2: {} bad points {:?} (min |diff| {m_half:.2e}); alpha=1: {} bad points {:?} (min |diff| {m_one:.2e}); runtime {:.1} s (< 600 s)",
            bad_half.len(),
            bad_half,
            bad_one.len(),
            bad_one,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_08_oracle_equivalence() {
    let cfg = AuditConfig { draws: 200, seed: 7, tol: 1e-8, kinds: vec![StateKind::Coherent, StateKind::Cat] };
    let start = Instant::now();
    let rep = audit::run(&cfg).unwrap();
    report(
        8,
        "oracle equivalence",
        rep.passed(),
        &format!(
            "{} points, max |closed - oracle| = {:.2e}, max shift under n_max+16 = {:.2e} (tol 1e-8), runtime {:.1} s",
            rep.points.len(),
            rep.max_disagreement(),
            rep.max_cutoff_shift(),
            start.elapsed().as_secs_f64()
        ),
    );
}

struct Draw {
    a: ComplexAmplitude,
    s: MeasurementSetting,
    p: ModeParams,
    tau: f64,
}

fn draw(rng: &mut ChaCha8Rng, gamma_max: f64) -> Draw {
    Draw {
        a: ComplexAmplitude::polar(rng.gen_range(0.0..1.5), rng.gen_range(0.0..TAU)).unwrap(),
        s: MeasurementSetting::new(rng.gen_range(0.0..3.0), rng.gen_range(0.0..TAU)).unwrap(),
        p: ModeParams::new(rng.gen_range(0.2..2.0), rng.gen_range(0.0..=gamma_max)).unwrap(),
        tau: rng.gen_range(1e-3..TAU),
    }
}

#[test]
fn criterion_09_property_suites() {
    const CASES: usize = 300;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = [0.0f64; 6];

    for _ in 0..CASES {
        let d = draw(&mut rng, 1.0);
        for j in [
            joint_probs_step(d.a, &d.s, &d.p, d.tau).unwrap(),
            cat_joint_probs_first(d.a, &d.s, &d.p, d.tau).unwrap(),
            cat_joint_probs_second(d.a, &d.s, &d.p, d.tau).unwrap(),
        ] {
            worst[0] = worst[0].max((j.total() - 1.0).abs());
        }
    }

    for _ in 0..CASES {
        let d = draw(&mut rng, 0.0);
        let p = ModeParams::new(1.0, 0.0).unwrap();
        for kind in [StateKind::Coherent, StateKind::Cat] {
            let shift = (k3(kind, d.a, &d.s, &p, d.tau).k3 - k3(kind, d.a, &d.s, &p, d.tau + TAU).k3).abs();
            worst[1] = worst[1].max(shift);
        }
    }

    for _ in 0..CASES {
        let d = draw(&mut rng, 1.0);
        let base = k3(StateKind::Cat, d.a, &d.s, &d.p, d.tau).k3;
        let flipped = k3(StateKind::Cat, d.a, &d.s.negated(), &d.p, d.tau).k3;
        let rotated = MeasurementSetting::new(d.s.r(), d.s.theta() + PI).unwrap();
        worst[2] = worst[2].max((base - flipped).abs());
        worst[3] = worst[3].max((base - k3(StateKind::Cat, d.a, &rotated, &d.p, d.tau).k3).abs());
    }

    // ∂K3/∂θ on the ridge lines θ = π − τ and θ = −τ, undamped, real α
    let h = 1e-5;
    for _ in 0..CASES {
        let a = ComplexAmplitude::real(rng.gen_range(0.0..1.5)).unwrap();
        let r = rng.gen_range(0.0..3.0);
        let tau = rng.gen_range(1e-3..TAU);
        let p = undamped();
        for theta in [PI - tau, -tau] {
            let at = |t: f64| k3(StateKind::Coherent, a, &MeasurementSetting::new(r, t).unwrap(), &p, tau).k3;
            worst[4] = worst[4].max(((at(theta + h) - at(theta - h)) / (2.0 * h)).abs());
        }
    }

    let peak = scaled_limit_function(PEAK_X);
    let grid_max = (0..=200_000).map(|i| scaled_limit_function(i as f64 * (PI / 2.0) / 200_000.0)).fold(f64::MIN, f64::max);
    worst[5] = (peak - 1.5).abs().max(grid_max - 1.5);

    let limits = [1e-12, 1e-10, 1e-10, 1e-10, 1e-6, 1e-12];
    let names = [
        "probability completeness",
        "undamped 2pi tau-periodicity",
        "cat beta -> -beta",
        "cat theta-period pi",
        "ridge dK3/dtheta",
        "g(x) max 3/2 at pi/12",
    ];
    let pass = worst.iter().zip(&limits).all(|(w, l)| w < l);
    let detail: Vec<String> =
        names.iter().zip(worst.iter().zip(&limits)).map(|(n, (w, l))| format!("{n} {w:.1e} (< {l:e})")).collect();
    report(9, "property suites", pass, &detail.join(", "));
}

#[test]
fn criterion_10_observed_ceiling() {
    let start = Instant::now();
    let mut best: Option<OptimumRecord> = None;
    let mut count = 0;
    let mut consider = |recs: &[OptimumRecord]| {
        for r in recs {
            count += 1;
            if best.is_none_or(|b| r.k3_star > b.k3_star) {
                best = Some(*r);
            }
        }
    };
    // the figure sweeps: both states, Γ ∈ {0, 0.1, 1}, α = 1/2 on (0, 6.5] and α = 1 on (0, 2π]
    for (alpha, tau_max) in [(0.5, 6.5), (1.0, TAU)] {
        let a = ComplexAmplitude::real(alpha).unwrap();
        let grid = SweepGrid::new(0.025, tau_max, 0.025).unwrap();
        for kind in [StateKind::Coherent, StateKind::Cat] {
            for gamma in [0.0, 0.1, 1.0] {
                let out = sweep(&grid, kind, a, &ModeParams::new(1.0, gamma).unwrap());
                assert!(out.failures.is_empty(), "{:?}", out.failures);
                consider(&out.records);
            }
        }
    }
    // and the near-singular end
    let small: Vec<OptimumRecord> = [StateKind::Coherent, StateKind::Cat]
        .into_iter()
        .flat_map(|kind| {
            (1..=8).map(move |n| optimize_at(0.001 * n as f64, kind, half(), &undamped(), &SearchConfig::default()).unwrap())
        })
        .collect();
    consider(&small);
    let b = best.unwrap();
    report(
        10,
        "observed ceiling",
        b.k3_star <= 1.5 + 1e-6,
        &format!(
            "max k3* = {:.9} at tau = {} (r* = {:.4}) over {count} optima (<= 1.5 + 1e-6), runtime {:.1} s",
            b.k3_star,
            b.tau,
            b.r_star,
            start.elapsed().as_secs_f64()
        ),
    );
}
