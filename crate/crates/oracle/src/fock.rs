//! Dense operators on the truncated number basis {|0⟩, …, |n_max⟩}.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{OracleError, Result};

/// A dense complex matrix on the truncated Fock space (a column for kets).
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub entries: DMatrix<Complex64>,
}

impl FockOperator {
    pub fn new(entries: DMatrix<Complex64>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(DMatrix::zeros(dim, dim))
    }

    /// N_max + 1.
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.entries.adjoint())
    }

    /// |ψ⟩⟨ψ| for a column `psi`.
    pub fn projector_onto(psi: &FockOperator) -> Self {
        Self::new(&psi.entries * psi.entries.adjoint())
    }

    /// A X A†, with A = self.
    pub fn sandwich(&self, x: &FockOperator) -> Self {
        Self::new(&self.entries * &x.entries * self.entries.adjoint())
    }

    /// Tr[self · x] without forming the product.
    pub fn trace_product(&self, x: &FockOperator) -> Complex64 {
        let (a, b) = (&self.entries, &x.entries);
        let n = a.nrows();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += a[(i, k)] * b[(k, i)];
            }
        }
        acc
    }

    /// Largest entry of |X − X†|.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Smallest eigenvalue of the hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Hermitian, trace `mass` within 1e-8 and positive semidefinite within 1e-8.
    pub fn check_density(&self, mass: f64) -> std::result::Result<(), String> {
        let h = self.hermiticity_defect();
        if h > 1e-10 {
            return Err(format!("not hermitian: defect {h:e}"));
        }
        let t = self.trace();
        if (t.re - mass).abs() > 1e-8 || t.im.abs() > 1e-8 {
            return Err(format!("trace {t} differs from {mass}"));
        }
        let e = self.min_eigenvalue();
        if e < -1e-8 {
            return Err(format!("negative eigenvalue {e:e}"));
        }
        Ok(())
    }
}

/// Poisson weight beyond the cutoff, Σ_{n > n_max} e^{−|a|²}|a|^{2n}/n!, summed
/// directly so that tiny tails are not lost to cancellation.
pub fn coherent_tail(amplitude: f64, n_max: usize) -> f64 {
    let x = amplitude * amplitude;
    if x == 0.0 {
        return 0.0;
    }
    // log of the first omitted term
    let mut log_term = -x + (n_max as f64 + 1.0) * x.ln() - ln_factorial(n_max + 1);
    let mut tail = 0.0;
    let mut n = n_max + 1;
    loop {
        let term = log_term.exp();
        tail += term;
        n += 1;
        log_term += x.ln() - (n as f64).ln();
        if (term < 1e-18 * tail.max(1e-300) && n as f64 > x) || n > n_max + 100_000 {
            break;
        }
    }
    tail
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Smallest cutoff whose tail at `amplitude` is below `tol`.
pub fn cutoff_for(amplitude: f64, tol: f64) -> usize {
    let mut n = (amplitude * amplitude).ceil() as usize;
    while coherent_tail(amplitude, n) >= tol {
        n += 1;
    }
    n
}

/// c_n = e^{−|a|²/2} aⁿ/√(n!) for n ≤ n_max.
pub fn coherent_vector(a: Complex64, n_max: usize, trunc_tol: f64) -> Result<FockOperator> {
    let defect = coherent_tail(a.norm(), n_max);
    if defect > trunc_tol {
        return Err(OracleError::Truncation { amplitude: a.norm(), n_max, defect, tol: trunc_tol });
    }
    let mut v = DVector::<Complex64>::zeros(n_max + 1);
    v[0] = Complex64::new((-0.5 * a.norm_sqr()).exp(), 0.0);
    for n in 1..=n_max {
        v[n] = v[n - 1] * a / (n as f64).sqrt();
    }
    Ok(FockOperator::new(DMatrix::from_column_slice(n_max + 1, 1, v.as_slice())))
}

/// Annihilation operator, ⟨n−1|a|n⟩ = √n.
pub fn annihilation(dim: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_vector() {
        let v = coherent_vector(Complex64::new(0.0, 0.0), 8, 1e-10).unwrap();
        assert_eq!(v.entries[(0, 0)], Complex64::new(1.0, 0.0));
        assert!(v.entries.iter().skip(1).all(|z| z.norm() == 0.0));
    }

    #[test]
    fn small_amplitude_tail() {
        assert!(coherent_tail(0.5, 16) < 1e-15);
        let v = coherent_vector(Complex64::new(0.5, 0.0), 16, 1e-10).unwrap();
        assert!((v.entries.norm_squared() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn large_amplitude_rejected() {
        assert!(matches!(
            coherent_vector(Complex64::new(3.0, 0.0), 4, 1e-10),
            Err(OracleError::Truncation { .. })
        ));
    }

    #[test]
    fn tail_matches_norm_defect() {
        let a = 2.0;
        let v = coherent_vector(Complex64::new(a, 0.0), 10, 1.0).unwrap();
        let direct = 1.0 - v.entries.norm_squared();
        assert!((coherent_tail(a, 10) - direct).abs() < 1e-14);
        let n = cutoff_for(a, 1e-10);
        assert!(coherent_tail(a, n) < 1e-10 && coherent_tail(a, n - 1) >= 1e-10);
    }

    #[test]
    fn density_checks() {
        let v = coherent_vector(Complex64::new(0.3, -0.4), 24, 1e-10).unwrap();
        let rho = FockOperator::projector_onto(&v);
        assert!(rho.check_density(1.0).is_ok());
        let mut bad = rho.clone();
        bad.entries[(0, 1)] += Complex64::new(1e-6, 0.0);
        assert!(bad.check_density(1.0).is_err());
        assert!((rho.trace_product(&rho).re - 1.0).abs() < 1e-12);
    }
}
