use thiserror::Error;

/// Errors raised by the laboratory operations.
///
/// `Capacity` is reserved for inputs that are well-formed but exceed an
/// enumeration or arithmetic budget; everything else is a validation failure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error("capacity exceeded: {what} needs {requested}, budget is {budget}")]
    Capacity {
        what: String,
        requested: String,
        budget: String,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("vertex-set mismatch: expected {expected} vertices, got {got}")]
    VertexSetMismatch { expected: usize, got: usize },
    #[error("pattern not represented: no uncoloured vertex has adjacency pattern {pattern}")]
    PatternNotRepresented { pattern: u64 },
    #[error("witness not found: {0}")]
    WitnessNotFound(String),
    #[error("dependent basis: the supplied vectors are linearly dependent")]
    DependentBasis,
}

impl LabError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        LabError::Invalid(msg.into())
    }

    pub fn capacity(what: impl Into<String>, requested: impl ToString, budget: impl ToString) -> Self {
        LabError::Capacity {
            what: what.into(),
            requested: requested.to_string(),
            budget: budget.to_string(),
        }
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, LabError::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
