//! Exact one-dimensional minimal fillings of finite pseudo-metric spaces.
//!
//! A filling of a space `(M, ρ)` is a weighted tree whose boundary is `M`
//! and whose path lengths dominate `ρ`. This crate computes minimal fillings
//! exactly over the rationals, together with the surrounding apparatus:
//! parametric fillings via linear programming, tours and multi-tours,
//! additive-space reconstruction, ℓ∞ realization and Steiner-type ratios.

pub mod additive;
pub mod embed;
pub mod fillings;
pub mod fixtures;
pub mod lp;
pub mod metric;
pub mod rational;
pub mod tours;
pub mod trees;

/// Absolute tolerance used for comparisons in float mode.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

pub use metric::{CyclicOrder, PseudoMetricSpace};
pub use rational::Rational;
pub use trees::{BinaryTopology, TreeTopology, WeightedTree};
