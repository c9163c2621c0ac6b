//! Graphs, G(n,p) sampling, and exact counting of labelled copies.

mod count;
mod dense;
mod distribution;
mod pattern;

pub use count::{
    automorphism_count, check_count_budget, count_copies_meeting, count_copies_within, count_homomorphisms,
    count_labelled_copies, delta_edge, MAX_AUTOMORPHISM_VERTICES,
};
pub(crate) use count::{count_meeting_unchecked, count_through_edge_unchecked};
pub use dense::{coin, full_mask, iter_bits, mask_of, sample_gnp, sample_gnp_with, Graph};
pub use distribution::{
    exact_distribution, exact_distribution_with_cutoff, expected_count, DistributionEntry, ExactDistribution,
    PointProbEstimate, DEFAULT_EXHAUSTIVE_CUTOFF, point_prob_estimate,
};
pub use pattern::{PatternGraph, MAX_PATTERN_VERTICES};
