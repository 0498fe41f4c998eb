//! Brute-force reference for the Leggett-Garg correlators: truncated
//! number-basis matrices, numerical solution of the damped master equation,
//! and matrix displaced-parity projectors. Nothing here uses the coherent-state
//! dyad algebra of `lgi-core`.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod parity;
pub mod protocol;

pub use error::{OracleError, Result};
pub use fock::{coherent_vector, FockOperator};
pub use parity::{displaced_parity_matrix, displacement};
pub use protocol::{k3_oracle, Integrator, OracleConfig, OracleReport, OracleWarning};
