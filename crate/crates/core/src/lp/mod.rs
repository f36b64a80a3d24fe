//! Exact rational linear programming.

pub mod field;
pub mod path;
pub mod simplex;

pub use path::{certify, optimal_range, solve, CertifyFailure, LPSolution, LpError, LpStatus, PathLP, SignMode};
