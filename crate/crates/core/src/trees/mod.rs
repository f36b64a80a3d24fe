//! Tree topologies with boundary, weighted trees and their tree metrics.

pub mod enumerate;
pub mod refine;
pub mod serialize;
pub mod topology;
pub mod weighted;

pub use enumerate::{binary_count, binary_from_index, enumerate_binary, enumerate_shard, DEFAULT_ENUMERATION_CAP};
pub use refine::{splittings, Splitting};
pub use topology::{BinaryTopology, Rooted, Split, TopologyKey, TreeTopology};
pub use weighted::{WeightMode, WeightedTree};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("invalid tree: {0}")]
    Invalid(String),
    #[error("topology is not binary")]
    NotBinary,
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("unknown point {0}")]
    UnknownPoint(usize),
    #[error("edge {0} has negative weight in filling mode")]
    NegativeWeight(usize),
    #[error("edge {0} is not degenerate and cannot be contracted")]
    NonDegenerateEdgeInF(usize),
    #[error("{n} points exceed the configured cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },
}
