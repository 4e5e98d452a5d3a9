//! Orbit-semigroup membership and the saturation probe.
//!
//! The exact side asks whether `sigma` itself admits a semi-invariant not
//! vanishing at `W`; the capacity side asks whether some multiple does. A
//! weight is saturated when the two agree. Neither side can bound the
//! multiple needed, so the probe only ever witnesses non-saturation.

use serde::Serialize;

use crate::capacity::{decide_capacity, CapacityParams, CapacityReport, ScalingStatus};
use crate::datum::{build_block_matrices, QuiverDatum};
use crate::error::{Error, Result};
use crate::oracle::{span_test, OracleMode, RandomizedParams, SpanDecision};
use crate::quiver::{DimensionVector, Quiver, Relation, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WeightSemigroupAnswer {
    Yes,
    No,
    Unsupported,
}

/// Outcome of solving `alpha^T E = sigma` on the support of `beta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightSemigroupReport {
    pub answer: WeightSemigroupAnswer,
    /// Vertex ids of the support of `beta`, in declaration order.
    pub support: Vec<String>,
    /// The solved `alpha`, aligned with `support`; absent when unsupported.
    pub alpha: Option<Vec<i64>>,
}

/// Whether `sigma` restricted to `supp(beta)` equals `<alpha, ->` for some
/// `alpha >= 0`.
///
/// Only path algebras without relations are handled. There every module has
/// projective dimension at most one, so the nonnegative integer solution is
/// all that is needed.
pub fn weight_semigroup_member(
    q: &Quiver,
    beta: &DimensionVector,
    sigma: &Weight,
    relations: &[Relation],
) -> Result<WeightSemigroupReport> {
    let pairing = sigma.pair(beta);
    if pairing != 0 {
        return Err(Error::WeightDimensionMismatch { pairing });
    }
    let support = beta.support();
    let ids = support.iter().map(|&v| q.vertices()[v].clone()).collect();
    if !relations.is_empty() {
        return Ok(WeightSemigroupReport {
            answer: WeightSemigroupAnswer::Unsupported,
            support: ids,
            alpha: None,
        });
    }

    // The Euler matrix is unitriangular in topological order, so the solve is
    // a forward substitution: alpha(y) = sigma(y) + sum over arrows x -> y of alpha(x).
    let sub = q.full_subquiver(&support);
    let mut alpha = vec![0i64; support.len()];
    for &y in sub.topological_order() {
        let incoming: i64 = sub.arrows().iter().filter(|a| a.head == y).map(|a| alpha[a.tail]).sum();
        alpha[y] = sigma.get(support[y]) + incoming;
    }
    let answer = if alpha.iter().all(|&a| a >= 0) {
        WeightSemigroupAnswer::Yes
    } else {
        WeightSemigroupAnswer::No
    };
    Ok(WeightSemigroupReport {
        answer,
        support: ids,
        alpha: Some(alpha),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipReport {
    pub weight: Vec<i64>,
    /// Exact side: does `sigma` itself lie in the orbit semigroup.
    pub sigma_in_s: SpanDecision,
    /// Capacity side: does some multiple of `sigma` lie in it.
    pub semistable: CapacityReport,
    pub in_weight_semigroup: WeightSemigroupReport,
}

/// Fills every field of a [`MembershipReport`] and checks the implications
/// between them.
///
/// A YES from the span test is always backed by a certificate, so it may not
/// meet a capacity of zero or a weight outside the weight semigroup; either
/// combination is reported as [`Error::InconsistencyAlarm`].
pub fn orbit_membership(d: &QuiverDatum, mode: OracleMode, capacity: CapacityParams) -> Result<MembershipReport> {
    let family = build_block_matrices(d)?;
    let sigma_in_s = span_test(&family, mode)?;
    let semistable = decide_capacity(&family, capacity);
    let in_weight_semigroup = weight_semigroup_member(d.quiver(), d.dim(), d.weight(), d.relations())?;

    if sigma_in_s.answer.is_yes() {
        if semistable.decision == ScalingStatus::Zero {
            return Err(Error::InconsistencyAlarm(
                "certified member of the orbit semigroup has capacity zero".into(),
            ));
        }
        if in_weight_semigroup.answer == WeightSemigroupAnswer::No {
            return Err(Error::InconsistencyAlarm(
                "certified member of the orbit semigroup lies outside the weight semigroup".into(),
            ));
        }
    }
    Ok(MembershipReport {
        weight: d.weight().values().to_vec(),
        sigma_in_s,
        semistable,
        in_weight_semigroup,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErpStatus {
    ConsistentErp,
    WitnessedNonSaturated,
    Inconclusive,
}

pub const DEFAULT_N_MAX: u32 = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaturationReport {
    pub weight: Vec<i64>,
    pub erp_status: ErpStatus,
    /// Smallest `n <= n_max` with `n sigma` in the orbit semigroup.
    pub witness: Option<u32>,
    pub n_max: u32,
    /// One decision per multiple `n = 1..=n_max`.
    pub decisions: Vec<SpanDecision>,
    pub capacity: CapacityReport,
}

/// Tests `n sigma` for `n = 1..=n_max` and compares with the capacity of `sigma`.
///
/// A symbolic mode falls back to the randomized test for multiples whose
/// family exceeds its limits.
pub fn saturation_probe(d: &QuiverDatum, n_max: u32, mode: OracleMode, capacity: CapacityParams) -> Result<SaturationReport> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let mode = match mode {
        OracleMode::Symbolic(limits) => OracleMode::Auto(limits, RandomizedParams::default()),
        other => other,
    };
    let base = build_block_matrices(d)?;
    let capacity = decide_capacity(&base, capacity);
    let mut decisions = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let family = if n == 1 { base.clone() } else { build_block_matrices(&d.scaled(n))? };
        let mut decision = span_test(&family, mode)?;
        decision.weight_multiple = n;
        decisions.push(decision);
    }

    let witness = decisions.iter().find(|s| s.answer.is_yes()).map(|s| s.weight_multiple);
    if witness.is_some() && capacity.decision == ScalingStatus::Zero {
        return Err(Error::InconsistencyAlarm(format!(
            "{} sigma is a certified member but the capacity of sigma is zero",
            witness.unwrap_or_default()
        )));
    }
    let first = &decisions[0];
    let erp_status = match (witness, capacity.decision) {
        (Some(1), ScalingStatus::Positive) => ErpStatus::ConsistentErp,
        (Some(n), _) if n >= 2 && first.is_exact() => ErpStatus::WitnessedNonSaturated,
        (None, ScalingStatus::Zero) => ErpStatus::ConsistentErp,
        _ => ErpStatus::Inconclusive,
    };
    Ok(SaturationReport {
        weight: d.weight().values().to_vec(),
        erp_status,
        witness,
        n_max,
        decisions,
        capacity,
    })
}
