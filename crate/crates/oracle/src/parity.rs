//! Displacement and displaced-parity matrices.

use lgi_core::{MeasurementSetting, Parity};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{OracleError, Result};
use crate::fock::{annihilation, coherent_tail, ln_factorial, FockOperator};

/// D(β) = exp(βa† − β*a) by matrix exponential of the truncated generator.
pub fn displacement(beta: Complex64, dim: usize) -> FockOperator {
    let a = annihilation(dim);
    let generator = a.adjoint() * beta - a * beta.conj();
    FockOperator::new(generator.exp())
}

/// D(β) from the closed-form matrix elements
/// ⟨m|D|n⟩ = √(n!/m!) β^{m−n} e^{−|β|²/2} L_n^{(m−n)}(|β|²) for m ≥ n,
/// and the mirror expression with −β* for m < n.
pub fn displacement_laguerre(beta: Complex64, dim: usize) -> FockOperator {
    let x = beta.norm_sqr();
    let mut d = DMatrix::zeros(dim, dim);
    for m in 0..dim {
        for n in 0..dim {
            let (hi, lo, z) = if m >= n { (m, n, beta) } else { (n, m, -beta.conj()) };
            let k = hi - lo;
            let scale = (0.5 * (ln_factorial(lo) - ln_factorial(hi)) - 0.5 * x).exp();
            d[(m, n)] = z.powu(k as u32) * scale * laguerre(lo, k as f64, x);
        }
    }
    FockOperator::new(d)
}

/// Generalized Laguerre polynomial L_n^{(k)}(x) by upward recurrence.
fn laguerre(n: usize, k: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + k - x);
    if n == 0 {
        return prev;
    }
    for j in 1..n {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Diagonal projector onto even (`Plus`) or odd (`Minus`) photon numbers.
pub fn number_parity(parity: Parity, dim: usize) -> DMatrix<Complex64> {
    let keep = match parity {
        Parity::Plus => 0,
        Parity::Minus => 1,
    };
    DMatrix::from_fn(dim, dim, |i, j| {
        if i == j && i % 2 == keep {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Both Π^(±)(β) = D(β) P_± D(β)† from one exponential.
///
/// Fails when a coherent state of amplitude 2r, the furthest point the
/// reflection x → 2β − x reaches from the vacuum, does not fit below n_max.
pub fn displaced_parity_pair(s: &MeasurementSetting, n_max: usize, trunc_tol: f64) -> Result<[FockOperator; 2]> {
    let defect = coherent_tail(2.0 * s.r(), n_max);
    if defect > trunc_tol {
        return Err(OracleError::Truncation { amplitude: 2.0 * s.r(), n_max, defect, tol: trunc_tol });
    }
    let dim = n_max + 1;
    let d = displacement(s.beta(), dim);
    Ok(Parity::BOTH.map(|parity| d.sandwich(&FockOperator::new(number_parity(parity, dim)))))
}

pub fn displaced_parity_matrix(
    s: &MeasurementSetting,
    parity: Parity,
    n_max: usize,
    trunc_tol: f64,
) -> Result<FockOperator> {
    let [plus, minus] = displaced_parity_pair(s, n_max, trunc_tol)?;
    Ok(match parity {
        Parity::Plus => plus,
        Parity::Minus => minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::coherent_vector;

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    #[test]
    fn bare_parity_at_zero() {
        let s = MeasurementSetting::new(0.0, 0.0).unwrap();
        let p = displaced_parity_matrix(&s, Parity::Plus, 7, 1e-10).unwrap();
        for i in 0..8 {
            let want = if i % 2 == 0 { 1.0 } else { 0.0 };
            assert!((p.entries[(i, i)] - Complex64::new(want, 0.0)).norm() < 1e-14);
        }
        assert!(max_abs(&(&p.entries - number_parity(Parity::Plus, 8))) < 1e-14);
    }

    #[test]
    fn exponential_matches_laguerre_elements() {
        let beta = Complex64::new(1.0, 1.0);
        let dim = 65;
        let e = displacement(beta, dim);
        let l = displacement_laguerre(beta, dim);
        // entries far from the cutoff are unaffected by truncation
        let mut worst: f64 = 0.0;
        for m in 0..40 {
            for n in 0..40 {
                worst = worst.max((e.entries[(m, n)] - l.entries[(m, n)]).norm());
            }
        }
        assert!(worst < 1e-10, "worst {worst:e}");
    }

    #[test]
    fn displaced_vacuum_is_coherent() {
        let beta = Complex64::new(-0.7, 0.4);
        let d = displacement(beta, 49);
        let v = coherent_vector(beta, 48, 1e-10).unwrap();
        let col = d.entries.column(0).into_owned();
        assert!((col - v.entries.column(0)).norm() < 1e-12);
    }

    #[test]
    fn idempotent_and_complete() {
        let s = MeasurementSetting::from_beta(Complex64::new(1.0, 1.0)).unwrap();
        let [plus, minus] = displaced_parity_pair(&s, 64, 1e-10).unwrap();
        assert!(max_abs(&(&plus.entries * &plus.entries - &plus.entries)) < 1e-8);
        assert!(max_abs(&(&minus.entries * &minus.entries - &minus.entries)) < 1e-8);
        let id = DMatrix::<Complex64>::identity(65, 65);
        assert!(max_abs(&(&plus.entries + &minus.entries - id)) < 1e-8);
    }

    #[test]
    fn expectation_on_coherent_state() {
        let s = MeasurementSetting::new(0.0, 0.0).unwrap();
        let p = displaced_parity_matrix(&s, Parity::Plus, 32, 1e-10).unwrap();
        let v = coherent_vector(Complex64::new(0.5, 0.0), 32, 1e-10).unwrap();
        let e = (v.entries.adjoint() * &p.entries * &v.entries)[(0, 0)];
        assert!((e.re - (-0.25f64).exp() * 0.25f64.cosh()).abs() < 1e-14);
    }

    #[test]
    fn support_escape_rejected() {
        let s = MeasurementSetting::new(3.0, 0.0).unwrap();
        assert!(matches!(displaced_parity_pair(&s, 16, 1e-10), Err(OracleError::Truncation { .. })));
    }
}
