//! Exact and Monte Carlo machinery for anticoncentration of subgraph counts in G(n, p).
//!
//! The crate is organised bottom-up: [`graph`] holds the counting kernels,
//! [`colour`] the coloured and shaded multigraphs that drive the induction,
//! [`cores`] the exact Γ-calculus on bounded cores, and [`probe`] the statistical
//! harness that compares exact expectations with sampled behaviour.

pub mod colour;
pub mod cores;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod probe;
pub mod rational;
pub mod seed;
pub mod stats;
pub mod table;

pub use error::{LabError, Result};
pub use graph::{Graph, PatternGraph};
pub use rational::{Prob, Rational};
pub use table::TableFunction;
