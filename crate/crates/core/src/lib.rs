//! Leggett-Garg K3 for a damped bosonic mode under displaced-parity
//! measurements, for coherent and even-cat initial states.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod coherent_algebra;
pub mod error;
pub mod lgi_cat;
pub mod lgi_coherent;
pub mod optimizer;
pub mod types;

pub use error::{LgiError, Result};
pub use lgi_cat::{cat_norm, cat_state, k3_cat};
pub use lgi_coherent::k3_coherent;
pub use types::{ComplexAmplitude, JointProbs, LgiPoint, MeasurementSetting, ModeParams, Parity, StateKind};
