//! Coherent-state dyad algebra.
//!
//! Every state that appears in the three-time protocol is a finite sum of
//! rank-one operators `c·|a⟩⟨b|` between coherent states. That set is closed
//! under displaced-parity projection and under the zero-temperature damped
//! evolution, so no Fock-space truncation is ever needed here.
//!
//! Every scalar factor produced below (overlaps, damping coefficients,
//! displacement phases) has modulus at most one, so products can underflow to
//! zero but never overflow, however large r grows.

use num_complex::Complex64;

use crate::error::Result;
use crate::types::{check_time, ModeParams, Parity};

/// `coeff · |ket⟩⟨bra|` in the (non-orthogonal) coherent-state frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dyad {
    pub ket: Complex64,
    pub bra: Complex64,
    pub coeff: Complex64,
}

impl Dyad {
    pub fn new(ket: Complex64, bra: Complex64, coeff: Complex64) -> Self {
        Self { ket, bra, coeff }
    }

    /// `|a⟩⟨a|` with unit weight.
    pub fn pure(a: Complex64) -> Self {
        Self::new(a, a, Complex64::new(1.0, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.bra, self.ket, self.coeff.conj())
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self::new(self.ket, self.bra, self.coeff * s)
    }

    /// Tr[c|a⟩⟨b|] = c⟨b|a⟩.
    pub fn trace(&self) -> Complex64 {
        self.coeff * coherent_overlap(self.bra, self.ket)
    }

    /// Substitute every label `x → x·factor`, keeping the coefficient.
    pub fn relabeled(&self, factor: Complex64) -> Self {
        Self::new(self.ket * factor, self.bra * factor, self.coeff)
    }
}

/// ⟨a|b⟩ = exp(−½|a|² − ½|b|² + a*b).
pub fn coherent_overlap(a: Complex64, b: Complex64) -> Complex64 {
    (a.conj() * b - 0.5 * (a.norm_sqr() + b.norm_sqr())).exp()
}

/// Exact damped evolution of a dyad over time `t`:
/// labels pick up e^{−iΩt} and the coefficient is multiplied by
/// exp{−½(|a|² + |b|² − 2ab*)(1 − e^{−2Γt})}.
pub fn dissipative_dyad_map(d: &Dyad, p: &ModeParams, t: f64) -> Result<Dyad> {
    check_time("t", t)?;
    Ok(evolve_unchecked(d, p, t))
}

pub(crate) fn evolve_unchecked(d: &Dyad, p: &ModeParams, t: f64) -> Dyad {
    let (a, b) = (d.ket, d.bra);
    let exponent = -0.5 * (a.norm_sqr() + b.norm_sqr() - 2.0 * a * b.conj()) * p.decay_fraction(t);
    let factor = p.label_factor(t);
    Dyad::new(a * factor, b * factor, d.coeff * exponent.exp())
}

/// One weighted term `weight·|label⟩` of a ket superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KetTerm {
    pub label: Complex64,
    pub weight: Complex64,
}

/// e^{β*a − βa*}; the exponent is purely imaginary.
pub(crate) fn displacement_phase(beta: Complex64, a: Complex64) -> Complex64 {
    let im = 2.0 * (beta.conj() * a).im;
    Complex64::new(0.0, im).exp()
}

/// Π^(±)(β)|a⟩ = ½[|a⟩ ± e^{β*a−βa*}|2β − a⟩].
pub fn parity_split(a: Complex64, beta: Complex64, parity: Parity) -> [KetTerm; 2] {
    let half = Complex64::new(0.5, 0.0);
    [
        KetTerm { label: a, weight: half },
        KetTerm {
            label: 2.0 * beta - a,
            weight: half * parity.sign() * displacement_phase(beta, a),
        },
    ]
}

/// ⟨a|Π^(±)(β)|a⟩ = e^{−|a−β|²}·cosh|a−β|² (or sinh for the minus outcome).
pub fn parity_probability(a: Complex64, beta: Complex64, parity: Parity) -> f64 {
    let x = (a - beta).norm_sqr();
    match parity {
        // e^{-x} cosh x = (1 + e^{-2x})/2
        Parity::Plus => 0.5 * (1.0 + (-2.0 * x).exp()),
        // e^{-x} sinh x = (1 - e^{-2x})/2
        Parity::Minus => -0.5 * (-2.0 * x).exp_m1(),
    }
}

/// Tr[X·Π^(±)(β)] = c⟨b|Π^(±)(β)|a⟩ for `X = c|a⟩⟨b|`.
pub fn dyad_parity_trace(d: &Dyad, beta: Complex64, parity: Parity) -> Complex64 {
    let [direct, reflected] = parity_split(d.ket, beta, parity);
    d.coeff
        * (direct.weight * coherent_overlap(d.bra, direct.label)
            + reflected.weight * coherent_overlap(d.bra, reflected.label))
}

/// Both parity traces of one dyad at once (shares the two overlaps).
pub(crate) fn dyad_parity_trace_pair(d: &Dyad, beta: Complex64) -> [Complex64; 2] {
    let direct = coherent_overlap(d.bra, d.ket);
    let reflected = displacement_phase(beta, d.ket) * coherent_overlap(d.bra, 2.0 * beta - d.ket);
    let half = 0.5 * d.coeff;
    [half * (direct + reflected), half * (direct - reflected)]
}

/// A (generally unnormalized) operator written as a sum of dyads.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DyadState {
    pub terms: Vec<Dyad>,
}

impl DyadState {
    pub fn new(terms: Vec<Dyad>) -> Self {
        Self { terms }
    }

    pub fn coherent(alpha: Complex64) -> Self {
        Self::new(vec![Dyad::pure(alpha)])
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn trace(&self) -> Complex64 {
        self.terms.iter().map(Dyad::trace).sum()
    }

    pub fn evolve(&self, p: &ModeParams, t: f64) -> Result<Self> {
        check_time("t", t)?;
        Ok(self.evolve_unchecked(p, t))
    }

    pub(crate) fn evolve_unchecked(&self, p: &ModeParams, t: f64) -> Self {
        Self::new(self.terms.iter().map(|d| evolve_unchecked(d, p, t)).collect())
    }

    /// Π^(±)(β) ρ Π^(±)(β), unnormalized (the weight is the outcome probability).
    pub fn project(&self, beta: Complex64, parity: Parity) -> Self {
        let mut out = Vec::with_capacity(4 * self.terms.len());
        for d in &self.terms {
            let kets = parity_split(d.ket, beta, parity);
            let bras = parity_split(d.bra, beta, parity);
            for k in &kets {
                for b in &bras {
                    out.push(Dyad::new(k.label, b.label, d.coeff * k.weight * b.weight.conj()));
                }
            }
        }
        Self::new(out)
    }

    /// Tr[Π^(±)(β) ρ].
    pub fn parity_trace(&self, beta: Complex64, parity: Parity) -> Complex64 {
        self.terms.iter().map(|d| dyad_parity_trace(d, beta, parity)).sum()
    }

    /// `[Tr[Π⁺ρ], Tr[Π⁻ρ]]`, real parts (ρ is hermitian throughout the protocol).
    pub fn parity_probabilities(&self, beta: Complex64) -> [f64; 2] {
        let mut acc = [Complex64::new(0.0, 0.0); 2];
        for d in &self.terms {
            let [p, m] = dyad_parity_trace_pair(d, beta);
            acc[0] += p;
            acc[1] += m;
        }
        [acc[0].re, acc[1].re]
    }

    /// `t[i][j] = Tr[Π_j(β) e^{𝓛τ}(Π_i(β) ρ Π_i(β))]`, the measure, wait τ, measure tree.
    pub fn sequential_table(&self, beta: Complex64, p: &ModeParams, tau: f64) -> [[f64; 2]; 2] {
        Parity::BOTH.map(|first| {
            self.project(beta, first)
                .evolve_unchecked(p, tau)
                .parity_probabilities(beta)
        })
    }
}
