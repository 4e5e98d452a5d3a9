use thiserror::Error;

/// Errors raised by quiver construction, datum building and the decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("unknown {kind} id `{id}`")]
    DanglingId { kind: &'static str, id: String },

    #[error("quiver has an oriented cycle through {}", .cycle.join(" -> "))]
    Cycle { cycle: Vec<String> },

    #[error("arrows {first} and {second} do not compose")]
    BrokenPath { first: String, second: String },

    #[error("paths must have length at least {min}")]
    PathTooShort { min: usize },

    #[error("relation mixes paths with different endpoints")]
    NonParallelRelation,

    #[error("representation violates relation #{index}")]
    RelationViolated { index: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("weight-dimension pairing nonzero (sigma . beta = {pairing})")]
    WeightDimensionMismatch { pairing: i64 },

    #[error("operation is only available for hereditary path algebras (no relations)")]
    BoundAlgebraUnsupported,

    #[error("base change at vertex `{vertex}` is not invertible")]
    SingularBaseChange { vertex: String },

    #[error("matrix is singular")]
    Singular,

    #[error("symbolic expansion refused: {0}")]
    SizeCapExceeded(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("consistency alarm: {0}")]
    InconsistencyAlarm(String),
}

pub type Result<T> = std::result::Result<T, Error>;
