//! Planar tours, multi-tours and exactness of fillings.

mod exactness;
mod multitour;
mod planar;
mod validate;

pub use exactness::{exactness_report, ExactnessReport, VertexExactness};
pub use multitour::{
    check_multitour, enumerate_multitours, eremin_value, realize_dual, EreminReport, MultiTourCertificate,
    MULTITOUR_CAP,
};
pub use planar::{enumerate_tours, is_planar, tour_table, TourRow, DEFAULT_TOUR_CAP};
pub use validate::{validate_structure, Claim, StructureCheck, StructureViolation};

use crate::fillings::FillingError;
use crate::trees::TreeError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ToursError {
    #[error("{n} points exceed the configured cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("topology has {topology} boundary points, space has {space}")]
    BoundaryMismatch { topology: usize, space: usize },
    #[error("the weighted tree is not a filling of the space")]
    NotAFilling,
    #[error("multi-tours need a binary topology")]
    NotBinary,
    #[error("point {point} occurs {count} times, expected {expected}")]
    CountViolation { point: usize, count: usize, expected: usize },
    #[error("edge {edge} is covered {count} times, expected {expected}")]
    CoverageViolation { edge: usize, count: usize, expected: usize },
    #[error("the sequence is not a single cycle")]
    NotSingleCycle,
    #[error("multi-tour half-perimeter {tour} exceeds the dual value {dual}")]
    BoundViolated { tour: String, dual: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Filling(#[from] FillingError),
}
