//! Cores, partial copies, Γ-functions, downward trees and span certificates, all exact.

mod core;
mod gamma;
mod span;
mod trees;

pub use self::core::{
    core_of_restricted, extended_core, top_patterns, u_partition, Core, UPartition, MAX_EXTENDED_CORE_LOG2,
};
pub use gamma::{gamma, partial_copies, GammaVector, PartialCopy};
pub use span::{positivity_witness, span_rank, PositivityWitness, SpanRank};
pub use trees::{enumerate_downward_trees, express_tree_gamma, DownwardTree, SpanCertificate};
