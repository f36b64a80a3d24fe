//! Additive and pseudo-additive spaces: detection, generating trees and
//! closed-form minimal fillings of small configurations.

mod checks;
mod oracles;
mod reconstruct;

pub use checks::{equal_halfperimeter_test, is_additive, is_pseudo_additive, rubleva_check, RublevaReport};
pub use oracles::{
    oracle_four_point, oracle_star, oracle_triangle, oracle_two_star, FourPointOracle, HubRule, Oracle,
};
pub use reconstruct::{canonical_form, reconstruct, GeneratingTree};

use crate::fillings::FillingError;
use crate::tours::ToursError;
use crate::trees::TreeError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdditiveError {
    #[error("space is not additive{}", .quadruple.map(|q| format!(" (quadruple {}, {}, {}, {})", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1)).unwrap_or_default())]
    NotAdditive { quadruple: Option<[usize; 4]> },
    #[error("expected {expected} points, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("closed form does not apply: {0}")]
    NotApplicable(String),
    #[error("{n} points exceed the configured cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Filling(#[from] FillingError),
    #[error(transparent)]
    Tours(#[from] ToursError),
}
