//! Numerics for the function `Φ(x) = x ψ'(x) − 1` on `(0, ∞)`, the ratio
//! functions built from its derivatives, the Laplace kernel `h(t)` with
//! `Φ(x) = ∫₀^∞ h(t) e^{−xt} dt`, and grid-based checkers for monotonicity
//! and complete monotonicity.
//!
//! Every value is computed in double-double arithmetic internally and
//! rounded to `f64` at the public boundary unless a `_dd` variant is used.

pub mod bernoulli;
pub mod cm;
pub mod dd;
pub mod error;
pub mod finite_diff;
pub mod grid;
pub mod kernel;
pub mod laplace;
pub mod lemma_f;
pub mod polygamma;
pub mod quadrature;
pub mod ratio;

pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use polygamma::{DerivOrders, EvalPoint, Polygamma, PrecisionPolicy};
