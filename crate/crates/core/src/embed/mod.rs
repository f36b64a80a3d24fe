//! ℓ∞ realization, spanning trees, planar Steiner trees and ratios.

mod linf;
pub mod mst;
mod planar;
mod ratios;
mod smt;

pub use linf::{induced_lengths, kuratowski_embed, kuratowski_network, linf_distance, LinfPoint};
pub use mst::mst;
pub use planar::PlanarConfig;
pub use ratios::{ratio_sweep, sgr, ssr_planar, Generator, HistogramBin, RatioSummary, HISTOGRAM_BINS};
pub use smt::{smt_planar, SmtResult, MAX_SMT_POINTS};

use crate::fillings::FillingError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("edge {0} has negative weight")]
    NegativeWeights(usize),
    #[error("tree has {tree} boundary points, space has {space}")]
    BoundaryMismatch { tree: usize, space: usize },
    #[error("{n} points is outside the supported range {min}..={max}")]
    TooManyPoints { n: usize, min: usize, max: usize },
    #[error("Steiner point iteration did not converge")]
    NonConvergence,
    #[error("ratio is undefined for a space with zero spanning tree")]
    Trivial,
    #[error("coordinates must be finite")]
    NonFinite,
    #[error(transparent)]
    Filling(#[from] FillingError),
}
