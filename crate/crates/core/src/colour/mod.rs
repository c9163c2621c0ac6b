//! Coloured, shaded multigraphs, their realisations, and the ψ/κ copy counts.

mod decompose;
mod extension;
mod fixtures;
mod position;
mod realize;
mod system;

pub use decompose::{decompose, pattern_classes, Decomposition, MAX_PATTERN_BITS};
pub use extension::{
    apply_extension, dispersedness_estimate, extend_restricted, restricted_warnings, sample_extension_with,
    DispersednessQuery, DispersednessReport, Extension, RestrictedColourSystem,
};
pub use fixtures::SystemRecipe;
pub use position::{
    adjacency_pattern, adjacency_patterns, classify_generality, general_position_check, is_complete,
    neighbourhood_family, pattern_width, position_scale, GeneralPositionReport, Generality, SetFamily,
    MAX_FAMILY_SIZE, MAX_PRESCRIPTIONS_LOG2,
};
pub use realize::{kappa, kappa_table, psi_table, realize};
pub use system::{ColourParams, ColourSystem, ColouredEdge, VertexColour, Violation};
