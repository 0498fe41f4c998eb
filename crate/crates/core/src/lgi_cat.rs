//! K3 for the even cat state (|α⟩ + |−α⟩)/√q(α).
//!
//! With K = |α⟩⟨α|, L = |α⟩⟨−α| and M = |−α⟩⟨−α| the state is
//! q(α)⁻¹(K + L + L† + M). A parity projection splits each of K, L, M into
//! four dyads, and the damped evolution acts on each dyad separately.
//!
//! C32 cannot be obtained by relabeling C21 as in the coherent case: at
//! t = τ the cross terms L, L† have lost the weight
//! exp{−2|α|²(1 − e^{−2Γτ})}, so the second-step decomposition is built at
//! α̃ = αe^{−iΩτ} with the L family scaled by that factor.

use num_complex::Complex64;

use crate::coherent_algebra::{displacement_phase, dyad_parity_trace_pair, evolve_unchecked, Dyad, DyadState};
use crate::error::Result;
use crate::types::{
    check_tau_positive, check_time, ComplexAmplitude, JointProbs, LgiPoint, MeasurementSetting,
    ModeParams, Parity,
};

/// q(α) = 2[1 + e^{−2|α|²}].
pub fn cat_norm(a: ComplexAmplitude) -> f64 {
    norm_of(a.value())
}

fn norm_of(a: Complex64) -> f64 {
    2.0 * (1.0 + (-2.0 * a.norm_sqr()).exp())
}

/// The normalized even cat state as four dyads.
pub fn cat_state(a: ComplexAmplitude) -> DyadState {
    let a = a.value();
    let w = Complex64::new(1.0 / norm_of(a), 0.0);
    DyadState::new(vec![
        Dyad::new(a, a, w),
        Dyad::new(a, -a, w),
        Dyad::new(-a, a, w),
        Dyad::new(-a, -a, w),
    ])
}

/// Π^(±)(β) X Π^(±)(β) = ¼[X⁽¹⁾ ± X⁽²⁾ ± X⁽³⁾ + X⁽⁴⁾] for X ∈ {K, L, M}.
///
/// `k_terms` and `m_terms` hold j = 1, 2, 4 (j = 3 is the adjoint of j = 2);
/// `l_terms` holds j = 1..4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatDecomposition {
    pub k_terms: [Dyad; 3],
    pub l_terms: [Dyad; 4],
    pub m_terms: [Dyad; 3],
}

impl CatDecomposition {
    /// The decomposition of K, L, M built from labels ±α at t = 0.
    pub fn new(alpha: Complex64, beta: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let a = alpha;
        let k_ref = 2.0 * beta - a;
        let m_ref = 2.0 * beta + a;
        // e^{β*α − βα*}
        let ph = displacement_phase(beta, a);
        let phc = ph.conj();
        Self {
            k_terms: [
                Dyad::new(a, a, one),
                Dyad::new(a, k_ref, phc),
                Dyad::new(k_ref, k_ref, one),
            ],
            l_terms: [
                Dyad::new(a, -a, one),
                Dyad::new(a, m_ref, ph),
                Dyad::new(k_ref, -a, ph),
                Dyad::new(k_ref, m_ref, ph * ph),
            ],
            m_terms: [
                Dyad::new(-a, -a, one),
                Dyad::new(-a, m_ref, ph),
                Dyad::new(m_ref, m_ref, one),
            ],
        }
    }

    pub fn k3_term(&self) -> Dyad {
        self.k_terms[1].adjoint()
    }

    pub fn m3_term(&self) -> Dyad {
        self.m_terms[1].adjoint()
    }

    /// Multiply the L family (and so L†) by `w`.
    pub fn with_cross_weight(mut self, w: f64) -> Self {
        for d in &mut self.l_terms {
            d.coeff *= w;
        }
        self
    }

    pub fn evolve(&self, p: &ModeParams, t: f64) -> Result<Self> {
        check_time("t", t)?;
        Ok(self.evolve_unchecked(p, t))
    }

    fn evolve_unchecked(&self, p: &ModeParams, t: f64) -> Self {
        Self {
            k_terms: self.k_terms.map(|d| evolve_unchecked(&d, p, t)),
            l_terms: self.l_terms.map(|d| evolve_unchecked(&d, p, t)),
            m_terms: self.m_terms.map(|d| evolve_unchecked(&d, p, t)),
        }
    }

    /// q⁻¹ Π(K + L + L† + M)Π for the given outcome, as a dyad list.
    pub fn reassemble(&self, parity: Parity, q: f64) -> DyadState {
        let s = parity.sign();
        let w = |c: f64| Complex64::new(c / (4.0 * q), 0.0);
        let [k1, k2, k4] = self.k_terms;
        let [l1, l2, l3, l4] = self.l_terms;
        let [m1, m2, m4] = self.m_terms;
        let mut out = vec![
            k1.scaled(w(1.0)),
            k2.scaled(w(s)),
            self.k3_term().scaled(w(s)),
            k4.scaled(w(1.0)),
            m1.scaled(w(1.0)),
            m2.scaled(w(s)),
            self.m3_term().scaled(w(s)),
            m4.scaled(w(1.0)),
        ];
        for (d, c) in [(l1, 1.0), (l2, s), (l3, s), (l4, 1.0)] {
            out.push(d.scaled(w(c)));
            out.push(d.adjoint().scaled(w(c)));
        }
        DyadState::new(out)
    }
}

/// Tr[X⁽ʲ⁾ Π(β)] for one parity outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceTable {
    pub k: [Complex64; 3],
    pub l: [Complex64; 4],
    pub m: [Complex64; 3],
}

impl TraceTable {
    /// ¼q⁻¹(K1 ± 2Re K2 + K4 + 2Re{L1 ± L2 ± L3 + L4} + M1 ± 2Re M2 + M4),
    /// the sign being that of the earlier outcome.
    fn combine(&self, first: Parity, q: f64) -> f64 {
        let s = first.sign();
        let k = self.k[0].re + s * 2.0 * self.k[1].re + self.k[2].re;
        let l = 2.0 * (self.l[0] + s * self.l[1] + s * self.l[2] + self.l[3]).re;
        let m = self.m[0].re + s * 2.0 * self.m[1].re + self.m[2].re;
        (k + l + m) / (4.0 * q)
    }
}

/// Both parity outcomes of the trace table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatTraces {
    pub plus: TraceTable,
    pub minus: TraceTable,
}

impl CatTraces {
    pub fn get(&self, parity: Parity) -> &TraceTable {
        match parity {
            Parity::Plus => &self.plus,
            Parity::Minus => &self.minus,
        }
    }

    fn from_decomposition(d: &CatDecomposition, beta: Complex64) -> Self {
        let k = d.k_terms.map(|x| dyad_parity_trace_pair(&x, beta));
        let l = d.l_terms.map(|x| dyad_parity_trace_pair(&x, beta));
        let m = d.m_terms.map(|x| dyad_parity_trace_pair(&x, beta));
        let pick = |i: usize| TraceTable {
            k: k.map(|t| t[i]),
            l: l.map(|t| t[i]),
            m: m.map(|t| t[i]),
        };
        Self { plus: pick(0), minus: pick(1) }
    }

    fn joint(&self, q: f64) -> [[f64; 2]; 2] {
        Parity::BOTH.map(|first| [self.plus.combine(first, q), self.minus.combine(first, q)])
    }
}

/// Traces of every evolved decomposition term against Π^(±)(β) after time τ.
pub fn trace_tables(
    a: ComplexAmplitude,
    s: &MeasurementSetting,
    p: &ModeParams,
    tau: f64,
) -> Result<CatTraces> {
    check_time("tau", tau)?;
    let beta = s.beta();
    let d = CatDecomposition::new(a.value(), beta).evolve_unchecked(p, tau);
    Ok(CatTraces::from_decomposition(&d, beta))
}

/// p(1±, 2±): measurements at t = 0 and t = τ.
pub fn cat_joint_probs_first(
    a: ComplexAmplitude,
    s: &MeasurementSetting,
    p: &ModeParams,
    tau: f64,
) -> Result<JointProbs> {
    check_time("tau", tau)?;
    first_unchecked(a.value(), s.beta(), p, tau)
}

/// p(2±, 3±): measurements at t = τ and t = 2τ, with no measurement at t = 0.
pub fn cat_joint_probs_second(
    a: ComplexAmplitude,
    s: &MeasurementSetting,
    p: &ModeParams,
    tau: f64,
) -> Result<JointProbs> {
    check_time("tau", tau)?;
    second_unchecked(a.value(), s.beta(), p, tau)
}

pub fn k3_cat(a: ComplexAmplitude, s: &MeasurementSetting, p: &ModeParams, tau: f64) -> Result<LgiPoint> {
    check_tau_positive(tau)?;
    k3_unchecked(a.value(), s.beta(), p, tau)
}

fn first_unchecked(a: Complex64, beta: Complex64, p: &ModeParams, tau: f64) -> Result<JointProbs> {
    let d = CatDecomposition::new(a, beta).evolve_unchecked(p, tau);
    JointProbs::from_table(CatTraces::from_decomposition(&d, beta).joint(norm_of(a)))
}

fn second_unchecked(a: Complex64, beta: Complex64, p: &ModeParams, tau: f64) -> Result<JointProbs> {
    let cross = (-2.0 * a.norm_sqr() * p.decay_fraction(tau)).exp();
    let d = CatDecomposition::new(a * p.label_factor(tau), beta)
        .with_cross_weight(cross)
        .evolve_unchecked(p, tau);
    JointProbs::from_table(CatTraces::from_decomposition(&d, beta).joint(norm_of(a)))
}

pub(crate) fn k3_unchecked(a: Complex64, beta: Complex64, p: &ModeParams, tau: f64) -> Result<LgiPoint> {
    let c21 = first_unchecked(a, beta, p, tau)?.correlator();
    let c31 = first_unchecked(a, beta, p, 2.0 * tau)?.correlator();
    let c32 = second_unchecked(a, beta, p, tau)?.correlator();
    Ok(LgiPoint::from_correlators(tau, c21, c32, c31))
}
