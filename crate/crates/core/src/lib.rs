//! Edmonds' problem for quiver data.
//!
//! A quiver datum `(W, sigma)` determines a family of square block matrices;
//! the datum's weight lies in the orbit semigroup of `W` exactly when the span
//! of that family contains a non-singular matrix. This crate builds the family
//! and decides the question two ways: exactly, by determinant identity
//! testing over the rationals, and numerically, by operator scaling of the
//! associated completely positive map.

pub mod capacity;
pub mod datum;
pub mod error;
pub mod fixtures;
pub mod oracle;
pub mod polynomial;
pub mod quiver;
pub mod rational;
pub mod representation;
pub mod semigroup;

pub use datum::{
    build_bipartite, build_block_matrices, schofield_matrix, split_weight, BipartiteReduction, BlockIndex,
    BlockMatrixFamily, BlockMember, PathSum, QuiverDatum, SigmaSplit,
};
pub use error::{Error, Result};
pub use quiver::{enumerate_paths, euler_form, euler_matrix, validate_quiver, DimensionVector, Path, Quiver, Relation, Weight};
pub use rational::RationalMatrix;
pub use representation::{hom_ext_dims, Representation};
pub use oracle::{
    decide_membership, randomized_span_test, symbolic_span_test, Answer, Certificate, Method, OracleMode, RandomizedParams,
    SpanDecision, SymbolicLimits,
};
pub use capacity::{
    capacity_scaling_law_check, decide_capacity, sinkhorn_step, CapacityParams, CapacityReport, CpOperator, ScalingState,
    ScalingStatus,
};
pub use semigroup::{
    orbit_membership, saturation_probe, weight_semigroup_member, ErpStatus, MembershipReport, SaturationReport,
    WeightSemigroupAnswer, WeightSemigroupReport,
};
