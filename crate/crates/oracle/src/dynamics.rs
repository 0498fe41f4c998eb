//! Numerical solution of ρ̇ = −i[ωa†a, ρ] + Γ(2aρa† − a†aρ − ρa†a) in the number basis.
//!
//! Element-wise the generator reads
//! ρ̇_mn = −iω(m−n)ρ_mn − Γ(m+n)ρ_mn + 2Γ√((m+1)(n+1)) ρ_{m+1,n+1},
//! so no matrix products are needed.

use lgi_core::ModeParams;
use nalgebra::DMatrix;
use num_complex::Complex64;
use crate::protocol::Integrator;

use crate::fock::FockOperator;

/// The right-hand side of the master equation.
pub fn lindblad_rhs(rho: &FockOperator, p: &ModeParams) -> FockOperator {
    let r = &rho.entries;
    let n = r.nrows();
    let (om, g) = (p.omega(), p.gamma());
    FockOperator::new(DMatrix::from_fn(n, n, |i, j| {
        let (m, k) = (i as f64, j as f64);
        let mut v = r[(i, j)] * Complex64::new(-g * (m + k), -om * (m - k));
        if i + 1 < n && j + 1 < n {
            v += r[(i + 1, j + 1)] * (2.0 * g * ((m + 1.0) * (k + 1.0)).sqrt());
        }
        v
    }))
}

/// One classical fourth-order Runge-Kutta step of size `dt`.
pub fn lindblad_step(rho: &FockOperator, p: &ModeParams, dt: f64) -> FockOperator {
    let k1 = lindblad_rhs(rho, p).entries;
    let k2 = lindblad_rhs(&FockOperator::new(&rho.entries + &k1 * Complex64::new(0.5 * dt, 0.0)), p).entries;
    let k3 = lindblad_rhs(&FockOperator::new(&rho.entries + &k2 * Complex64::new(0.5 * dt, 0.0)), p).entries;
    let k4 = lindblad_rhs(&FockOperator::new(&rho.entries + &k3 * Complex64::new(dt, 0.0)), p).entries;
    let sum = k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4;
    FockOperator::new(&rho.entries + sum * Complex64::new(dt / 6.0, 0.0))
}

/// Integrate over `t` with RK4, using the largest step ≤ `dt` that divides `t` evenly.
pub fn evolve_rk4(rho: &FockOperator, p: &ModeParams, t: f64, dt: f64) -> FockOperator {
    let steps = (t / dt).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut out = rho.clone();
    for _ in 0..steps {
        out = lindblad_step(&out, p, h);
    }
    out
}

/// Exact propagation in the truncated basis.
///
/// With ρ_mn = e^{−iω(m−n)t − Γ(m+n)t}σ_mn the equation becomes dσ/du = Jσ
/// with (Jσ)_mn = √((m+1)(n+1)) σ_{m+1,n+1} and u = 1 − e^{−2Γt}. J is
/// nilpotent on a finite basis, so σ(u) = Σ_k u^k J^k σ(0)/k! terminates.
pub fn evolve_series(rho: &FockOperator, p: &ModeParams, t: f64) -> FockOperator {
    let n = rho.dim();
    let u = -(-2.0 * p.gamma() * t).exp_m1();
    let mut sigma = rho.entries.clone();
    if u > 0.0 {
        let mut term = rho.entries.clone();
        for k in 1..n {
            let next = DMatrix::from_fn(n, n, |i, j| {
                if i + 1 < n && j + 1 < n {
                    term[(i + 1, j + 1)] * (((i + 1) * (j + 1)) as f64).sqrt() * (u / k as f64)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            term = next;
            let size = term.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            sigma += &term;
            if size < 1e-18 {
                break;
            }
        }
    }
    let (om, g) = (p.omega(), p.gamma());
    FockOperator::new(DMatrix::from_fn(n, n, |i, j| {
        let (m, k) = (i as f64, j as f64);
        sigma[(i, j)] * Complex64::from_polar((-g * (m + k) * t).exp(), -om * (m - k) * t)
    }))
}

pub fn evolve(rho: &FockOperator, p: &ModeParams, t: f64, integrator: Integrator) -> FockOperator {
    match integrator {
        Integrator::Series => evolve_series(rho, p, t),
        Integrator::Rk4 { dt } => evolve_rk4(rho, p, t, dt),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::coherent_vector;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    fn pure(a: Complex64, n_max: usize) -> FockOperator {
        FockOperator::projector_onto(&coherent_vector(a, n_max, 1e-12).unwrap())
    }

    #[test]
    fn undamped_keeps_photon_statistics() {
        let p = ModeParams::new(1.0, 0.0).unwrap();
        let rho = pure(c(0.8, 0.3), 30);
        let out = evolve_rk4(&rho, &p, 0.7, 1e-3);
        for i in 0..31 {
            assert!((out.entries[(i, i)] - rho.entries[(i, i)]).norm() < 1e-12);
        }
    }

    #[test]
    fn step_preserves_trace() {
        let p = ModeParams::new(1.3, 0.4).unwrap();
        let rho = pure(c(1.0, -0.5), 32);
        let next = lindblad_step(&rho, &p, 1e-3);
        assert!((next.trace() - rho.trace()).norm() < 1e-10);
    }

    #[test]
    fn coherent_state_follows_damped_label() {
        let p = ModeParams::new(1.0, 0.2).unwrap();
        let a = c(0.5, 0.0);
        let t = 1.0;
        let rho = evolve_rk4(&pure(a, 24), &p, t, 1e-3);
        let target = coherent_vector(a * p.label_factor(t), 24, 1e-12).unwrap();
        let fidelity = (target.entries.adjoint() * &rho.entries * &target.entries)[(0, 0)].re;
        assert!(fidelity > 1.0 - 1e-8, "{fidelity}");
    }

    #[test]
    fn cat_cross_terms_lose_weight() {
        let p = ModeParams::new(1.0, 0.1).unwrap();
        let a = c(0.5, 0.0);
        let n_max = 24;
        let plus = coherent_vector(a, n_max, 1e-12).unwrap().entries;
        let minus = coherent_vector(-a, n_max, 1e-12).unwrap().entries;
        let psi = &plus + &minus;
        let psi = &psi / Complex64::new(psi.norm(), 0.0);
        let rho0 = FockOperator::new(&psi * psi.adjoint());
        let tau = 2.0;
        let rho = evolve_rk4(&rho0, &p, tau, 1e-3);
        let f = p.label_factor(tau);
        let q = (&plus + &minus).norm_squared();
        let lambda = (-2.0 * a.norm_sqr() * p.decay_fraction(tau)).exp();
        let pt = coherent_vector(a * f, n_max, 1e-12).unwrap().entries;
        let mt = coherent_vector(-a * f, n_max, 1e-12).unwrap().entries;
        let expected = (&pt * pt.adjoint()
            + &mt * mt.adjoint()
            + (&pt * mt.adjoint() + &mt * pt.adjoint()) * Complex64::new(lambda, 0.0))
            / Complex64::new(q, 0.0);
        assert!(max_abs(&(&rho.entries - expected)) < 1e-7);
    }

    #[test]
    fn series_agrees_with_runge_kutta() {
        let p = ModeParams::new(0.9, 0.35).unwrap();
        let v = coherent_vector(c(0.6, 0.2), 28, 1e-12).unwrap().entries;
        let w = coherent_vector(c(-0.3, 0.7), 28, 1e-12).unwrap().entries;
        let rho = FockOperator::new(&v * w.adjoint() * Complex64::new(0.3, 0.1) + &w * v.adjoint());
        let a = evolve_series(&rho, &p, 1.3);
        let b = evolve_rk4(&rho, &p, 1.3, 1e-3);
        assert!(max_abs(&(&a.entries - &b.entries)) < 1e-10);
        let zero = evolve_series(&rho, &p, 0.0);
        assert_eq!(zero, rho);
    }

    #[test]
    fn series_matches_exact_coherent_solution() {
        let p = ModeParams::new(1.0, 0.5).unwrap();
        let a = c(1.2, -0.4);
        let t = 2.3;
        let out = evolve_series(&pure(a, 40), &p, t);
        let want = pure(a * p.label_factor(t), 40);
        assert!(max_abs(&(&out.entries - &want.entries)) < 1e-12);
    }
}
