//! Operator scaling for the completely positive map `T(X) = sum A^T X A`
//! built from a block-matrix family, and the capacity decision derived from it.
//!
//! Each Sinkhorn step normalises `T(I)` to the identity by `A <- A T(I)^{-1/2}`
//! and then `T*(I) = sum A A^T` by `A <- T*(I)^{-1/2} A`. Replacing every
//! Kraus operator by `g A h` multiplies the capacity by `det(g)^2 det(h)^2`,
//! so the running sum of `-log det` of the normalisers tracks
//! `log cap(current) - log cap(original)`. Near a doubly stochastic operator
//! the capacity is close to one, which turns that sum into an estimate of the
//! original capacity.
//!
//! The outcome is three-valued: double precision cannot certify the boundary,
//! so runs that neither converge nor collapse end as `Inconclusive`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::datum::BlockMatrixFamily;
use crate::error::{Error, Result};
use crate::rational::rational_to_f64;

/// Eigenvalues below this fraction of the largest count as a collapse.
pub const RANK_COLLAPSE_RATIO: f64 = 1e-14;
/// Capacity upper bound below which the operator is declared to have capacity zero.
pub const ZERO_CAPACITY_BOUND: f64 = 1e-30;
/// Allowed increase of the doubly-stochastic distance across full steps.
pub const MONOTONICITY_SLACK: f64 = 1e-9;
const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Completely positive operator given by real Kraus matrices of one size.
#[derive(Clone, Debug, PartialEq)]
pub struct CpOperator {
    size: usize,
    kraus: Vec<DMatrix<f64>>,
}

impl CpOperator {
    pub fn new(size: usize, kraus: Vec<DMatrix<f64>>) -> Result<Self> {
        if let Some(k) = kraus.iter().position(|a| a.shape() != (size, size)) {
            return Err(Error::Shape(format!("Kraus operator {k} is not {size}x{size}")));
        }
        Ok(Self { size, kraus })
    }

    /// Densifies the family in double precision.
    pub fn from_family(family: &BlockMatrixFamily) -> Self {
        let n = family.size();
        let kraus = family
            .members()
            .iter()
            .map(|m| {
                let mut a = DMatrix::zeros(n, n);
                for i in 0..m.block.rows() {
                    for j in 0..m.block.cols() {
                        a[(m.row_offset + i, m.col_offset + j)] = rational_to_f64(m.block.get(i, j));
                    }
                }
                a
            })
            .collect();
        Self { size: n, kraus }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn kraus(&self) -> &[DMatrix<f64>] {
        &self.kraus
    }

    fn check(&self, x: &DMatrix<f64>) -> Result<()> {
        if x.shape() != (self.size, self.size) {
            return Err(Error::Shape(format!(
                "operator acts on {n}x{n} matrices, got {}x{}",
                x.nrows(),
                x.ncols(),
                n = self.size
            )));
        }
        Ok(())
    }

    /// `T(X) = sum A^T X A`.
    pub fn apply(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check(x)?;
        let y = self
            .kraus
            .iter()
            .fold(DMatrix::zeros(self.size, self.size), |acc, a| acc + a.transpose() * x * a);
        Ok(symmetrized(y))
    }

    /// `T*(X) = sum A X A^T`.
    pub fn apply_dual(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check(x)?;
        let y = self
            .kraus
            .iter()
            .fold(DMatrix::zeros(self.size, self.size), |acc, a| acc + a * x * a.transpose());
        Ok(symmetrized(y))
    }

    /// The operator with Kraus matrices `g A h`.
    pub fn transformed(&self, g: &DMatrix<f64>, h: &DMatrix<f64>) -> Result<Self> {
        self.check(g)?;
        self.check(h)?;
        Ok(Self {
            size: self.size,
            kraus: self.kraus.iter().map(|a| g * a * h).collect(),
        })
    }

    /// `||T(I) - I||_F^2 + ||T*(I) - I||_F^2`.
    pub fn ds(&self) -> f64 {
        let id = DMatrix::identity(self.size, self.size);
        let row = self.apply(&id).expect("square") - &id;
        let col = self.apply_dual(&id).expect("square") - &id;
        row.norm_squared() + col.norm_squared()
    }
}

fn symmetrized(y: DMatrix<f64>) -> DMatrix<f64> {
    let asym = (&y - y.transpose()).amax();
    debug_assert!(
        asym <= SYMMETRY_TOLERANCE * y.amax().max(1.0),
        "Kraus sum lost symmetry: {asym}"
    );
    (&y + y.transpose()) * 0.5
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScalingStatus {
    Running,
    Positive,
    Zero,
    Inconclusive,
}

/// Which normaliser failed to be positive definite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `T(I) = sum A^T A`.
    Image,
    /// `T*(I) = sum A A^T`.
    DualImage,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Smallest `lambda_min / lambda_max` seen in any normaliser.
    pub min_eigen_ratio: Option<f64>,
    /// Normalisers whose spectrum fell under the collapse ratio.
    pub clamp_events: usize,
    pub collapse_side: Option<Side>,
    /// Full steps where the distance grew by more than the slack.
    pub monotonicity_violations: usize,
    /// Distance to doubly stochastic: the initial value, then one entry per full step.
    pub ds_history: Vec<f64>,
}

/// Mutable state of one scaling run.
#[derive(Clone, Debug)]
pub struct ScalingState {
    operator: CpOperator,
    pub iterations: usize,
    pub ds: f64,
    /// Sum of `-log det` over all normalisers applied so far.
    pub log_cap_acc: f64,
    pub status: ScalingStatus,
    pub diagnostics: Diagnostics,
}

impl ScalingState {
    pub fn new(operator: CpOperator) -> Self {
        let ds = operator.ds();
        Self {
            operator,
            iterations: 0,
            ds,
            log_cap_acc: 0.0,
            status: ScalingStatus::Running,
            diagnostics: Diagnostics {
                ds_history: vec![ds],
                ..Diagnostics::default()
            },
        }
    }

    pub fn operator(&self) -> &CpOperator {
        &self.operator
    }

    /// `A <- A T(I)^{-1/2}`; afterwards `T(I) = I`.
    pub fn normalize_image(&mut self) -> std::result::Result<(), Side> {
        let id = DMatrix::identity(self.operator.size, self.operator.size);
        let r = self.operator.apply(&id).expect("square");
        let (inv_sqrt, log_det) = self.inverse_sqrt(r, Side::Image)?;
        for a in &mut self.operator.kraus {
            *a = &*a * &inv_sqrt;
        }
        self.log_cap_acc -= log_det;
        Ok(())
    }

    /// `A <- T*(I)^{-1/2} A`; afterwards `T*(I) = I`.
    pub fn normalize_dual_image(&mut self) -> std::result::Result<(), Side> {
        let id = DMatrix::identity(self.operator.size, self.operator.size);
        let c = self.operator.apply_dual(&id).expect("square");
        let (inv_sqrt, log_det) = self.inverse_sqrt(c, Side::DualImage)?;
        for a in &mut self.operator.kraus {
            *a = &inv_sqrt * &*a;
        }
        self.log_cap_acc -= log_det;
        Ok(())
    }

    fn inverse_sqrt(&mut self, m: DMatrix<f64>, side: Side) -> std::result::Result<(DMatrix<f64>, f64), Side> {
        let eig = SymmetricEigen::new(m);
        let max = eig.eigenvalues.max();
        let min = eig.eigenvalues.min();
        let ratio = if max > 0.0 { min / max } else { 0.0 };
        let seen = self.diagnostics.min_eigen_ratio.get_or_insert(ratio);
        *seen = seen.min(ratio);
        if !max.is_finite() || max <= 0.0 || ratio < RANK_COLLAPSE_RATIO {
            self.diagnostics.clamp_events += 1;
            self.diagnostics.collapse_side = Some(side);
            return Err(side);
        }
        let log_det = eig.eigenvalues.iter().map(|l| l.ln()).sum();
        let scaled = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.sqrt().recip()));
        let inv_sqrt = &eig.eigenvectors * scaled * eig.eigenvectors.transpose();
        Ok((inv_sqrt, log_det))
    }

    /// Upper bound on the capacity of the original operator, valid once a
    /// normalisation has been applied.
    pub fn capacity_upper_bound(&self) -> f64 {
        (-self.log_cap_acc).exp()
    }
}

/// One full Sinkhorn step; a rank collapse sets the status to `Zero`.
pub fn sinkhorn_step(mut state: ScalingState) -> ScalingState {
    let outcome = state.normalize_image().and_then(|_| state.normalize_dual_image());
    state.iterations += 1;
    match outcome {
        Ok(()) => {
            let previous = state.ds;
            state.ds = state.operator.ds();
            state.diagnostics.ds_history.push(state.ds);
            if state.ds > previous + MONOTONICITY_SLACK {
                state.diagnostics.monotonicity_violations += 1;
            }
        }
        Err(_) => state.status = ScalingStatus::Zero,
    }
    state
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapacityParams {
    /// `None`: `100 N^2 (b + N)` with `b` the largest bit length of the input entries.
    pub max_iters: Option<usize>,
    /// `None`: `1 / (N + 1)`.
    pub threshold: Option<f64>,
    /// After the decision, keep scaling until the distance is below this value
    /// to sharpen the capacity estimate.
    pub polish_tolerance: f64,
    pub polish_max_iters: usize,
}

impl Default for CapacityParams {
    fn default() -> Self {
        Self {
            max_iters: None,
            threshold: None,
            polish_tolerance: 1e-24,
            polish_max_iters: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityReport {
    pub decision: ScalingStatus,
    pub matrix_size: usize,
    /// Iterations until the decision.
    pub iterations: usize,
    /// Extra iterations spent refining the estimate after a positive decision.
    pub polish_iterations: usize,
    pub max_iters: usize,
    pub threshold: f64,
    pub final_ds: f64,
    /// Estimated capacity; only reported when positive.
    pub capacity_estimate: Option<f64>,
    pub log_capacity_estimate: Option<f64>,
    pub diagnostics: Diagnostics,
}

fn default_max_iters(n: usize, bits: u64) -> usize {
    100 * n * n * (bits as usize + n)
}

/// Decides positivity of the capacity of the family's operator.
pub fn decide_capacity(family: &BlockMatrixFamily, params: CapacityParams) -> CapacityReport {
    let max_iters = params
        .max_iters
        .unwrap_or_else(|| default_max_iters(family.size(), family.max_bit_length()));
    decide_operator_capacity(&CpOperator::from_family(family), max_iters, params)
}

/// [`decide_capacity`] for an explicit operator; `max_iters` must be given.
pub fn decide_operator_capacity(operator: &CpOperator, max_iters: usize, params: CapacityParams) -> CapacityReport {
    let n = operator.size();
    let threshold = params.threshold.unwrap_or(1.0 / (n as f64 + 1.0));
    let mut report = CapacityReport {
        decision: ScalingStatus::Positive,
        matrix_size: n,
        iterations: 0,
        polish_iterations: 0,
        max_iters,
        threshold,
        final_ds: 0.0,
        capacity_estimate: Some(1.0),
        log_capacity_estimate: Some(0.0),
        diagnostics: Diagnostics::default(),
    };
    if n == 0 {
        return report;
    }

    let mut state = ScalingState::new(operator.clone());
    // Log-capacity offset after the first step; scaling every Kraus matrix by
    // a constant only moves this offset, so the zero test is measured from it.
    let mut first_step_acc = None;
    while state.status == ScalingStatus::Running {
        if state.ds < threshold {
            state.status = ScalingStatus::Positive;
            break;
        }
        if state.iterations >= max_iters {
            state.status = ScalingStatus::Inconclusive;
            break;
        }
        state = sinkhorn_step(state);
        if state.status != ScalingStatus::Running {
            break;
        }
        if state.diagnostics.monotonicity_violations > 0 {
            state.status = ScalingStatus::Inconclusive;
            break;
        }
        let offset = *first_step_acc.get_or_insert(state.log_cap_acc);
        if (offset - state.log_cap_acc).exp() < ZERO_CAPACITY_BOUND {
            state.status = ScalingStatus::Zero;
        }
    }
    report.iterations = state.iterations;

    if state.status == ScalingStatus::Positive {
        while state.ds > params.polish_tolerance && report.polish_iterations < params.polish_max_iters {
            let next = sinkhorn_step(state.clone());
            if next.status == ScalingStatus::Zero || next.ds >= state.ds {
                break;
            }
            state = next;
            report.polish_iterations += 1;
        }
        report.capacity_estimate = Some(state.capacity_upper_bound());
        report.log_capacity_estimate = Some(-state.log_cap_acc);
    } else {
        report.capacity_estimate = None;
        report.log_capacity_estimate = None;
    }
    report.decision = state.status;
    report.final_ds = state.ds;
    report.diagnostics = state.diagnostics;
    report
}

/// Relative discrepancy between the capacity estimate of `{g A h}` and
/// `det(g)^2 det(h)^2` times that of `{A}`; `None` unless both runs are positive.
pub fn capacity_scaling_law_check(
    operator: &CpOperator,
    g: &DMatrix<f64>,
    h: &DMatrix<f64>,
    max_iters: usize,
    params: CapacityParams,
) -> Result<Option<f64>> {
    let moved = operator.transformed(g, h)?;
    let base = decide_operator_capacity(operator, max_iters, params);
    let scaled = decide_operator_capacity(&moved, max_iters, params);
    let (Some(a), Some(b)) = (base.log_capacity_estimate, scaled.log_capacity_estimate) else {
        return Ok(None);
    };
    let factor = 2.0 * (g.determinant().abs().ln() + h.determinant().abs().ln());
    Ok(Some((b - a - factor).exp_m1().abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::RationalMatrix;

    fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = 1.0;
        m
    }

    fn op(kraus: Vec<DMatrix<f64>>) -> CpOperator {
        CpOperator::new(kraus[0].nrows(), kraus).unwrap()
    }

    fn spd() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 3.0])
    }

    #[test]
    fn identity_kraus_is_the_identity_map() {
        let t = op(vec![DMatrix::identity(2, 2)]);
        assert_eq!(t.apply(&spd()).unwrap(), spd());
        assert_eq!(t.apply_dual(&spd()).unwrap(), spd());
    }

    #[test]
    fn diagonal_units() {
        let t = op(vec![unit(2, 0, 0), unit(2, 1, 1)]);
        assert_eq!(t.apply(&spd()).unwrap(), DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 3.0])));
        assert_eq!(t.apply_dual(&DMatrix::identity(2, 2)).unwrap(), DMatrix::identity(2, 2));
    }

    #[test]
    fn same_row_units() {
        let t = op(vec![unit(2, 0, 0), unit(2, 0, 1)]);
        assert_eq!(t.apply(&spd()).unwrap(), DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0])));
        assert_eq!(t.apply_dual(&DMatrix::identity(2, 2)).unwrap(), unit(2, 0, 0) * 2.0);
    }

    #[test]
    fn dimension_mismatch() {
        let t = op(vec![DMatrix::identity(2, 2)]);
        assert!(matches!(t.apply(&DMatrix::identity(3, 3)), Err(Error::Shape(_))));
        assert!(matches!(t.apply_dual(&DMatrix::identity(1, 1)), Err(Error::Shape(_))));
        assert!(CpOperator::new(2, vec![DMatrix::identity(3, 3)]).is_err());
    }

    #[test]
    fn doubly_stochastic_is_a_fixed_point() {
        let state = ScalingState::new(op(vec![DMatrix::identity(3, 3)]));
        assert_eq!(state.ds, 0.0);
        let report = decide_operator_capacity(state.operator(), 100, CapacityParams::default());
        assert_eq!(report.decision, ScalingStatus::Positive);
        assert_eq!((report.iterations, report.polish_iterations), (0, 0));
        assert_eq!(report.capacity_estimate, Some(1.0));
    }

    #[test]
    fn scaled_identity_is_rescaled_in_one_step() {
        for n in 1..=4 {
            let state = sinkhorn_step(ScalingState::new(op(vec![DMatrix::identity(n, n) * 2.0])));
            assert!((state.log_cap_acc + n as f64 * 4f64.ln()).abs() < 1e-12);
            assert!(state.ds < 1e-24);
            assert!((state.operator().kraus()[0].clone() - DMatrix::identity(n, n)).amax() < 1e-12);
        }
    }

    #[test]
    fn same_row_units_collapse() {
        let mut state = ScalingState::new(op(vec![unit(2, 0, 0), unit(2, 0, 1)]));
        // T(I) = I already; the dual side 2 E_11 is singular.
        assert!(state.normalize_image().is_ok());
        assert_eq!(state.normalize_dual_image(), Err(Side::DualImage));
        let state = sinkhorn_step(ScalingState::new(op(vec![unit(2, 0, 0), unit(2, 0, 1)])));
        assert_eq!(state.status, ScalingStatus::Zero);
        assert_eq!(state.diagnostics.clamp_events, 1);
    }

    #[test]
    fn half_steps_normalise_their_side() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0]);
        let b = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 1.0, 2.0, 0.0, 1.0, 1.0, 1.0, 0.0]);
        let mut state = ScalingState::new(op(vec![a, b]));
        let id = DMatrix::identity(3, 3);
        for _ in 0..5 {
            state.normalize_image().unwrap();
            assert!((state.operator().apply(&id).unwrap() - &id).norm() < 1e-10);
            state.normalize_dual_image().unwrap();
            assert!((state.operator().apply_dual(&id).unwrap() - &id).norm() < 1e-10);
        }
    }

    #[test]
    fn empty_and_trivial_sizes() {
        let empty = BlockMatrixFamily::from_dense(0, vec![]).unwrap();
        let r = decide_capacity(&empty, CapacityParams::default());
        assert_eq!((r.decision, r.capacity_estimate), (ScalingStatus::Positive, Some(1.0)));

        let no_members = BlockMatrixFamily::from_parts(2, vec![2], vec![2], vec![], vec![]).unwrap();
        assert_eq!(decide_capacity(&no_members, CapacityParams::default()).decision, ScalingStatus::Zero);
    }

    #[test]
    fn default_iteration_budget() {
        let fam = BlockMatrixFamily::from_dense(2, vec![RationalMatrix::from_i64(2, 2, &[5, 0, 0, 1])]).unwrap();
        let r = decide_capacity(&fam, CapacityParams::default());
        // b = 3 bits for the entry 5.
        assert_eq!(r.max_iters, 100 * 4 * (3 + 2));
        assert_eq!(r.threshold, 1.0 / 3.0);
        assert_eq!(r.decision, ScalingStatus::Positive);
        assert!((r.capacity_estimate.unwrap() - 25.0).abs() < 1e-9);
    }

    #[test]
    fn scaling_law() {
        let params = CapacityParams::default();
        let id2 = DMatrix::identity(2, 2);
        let t = op(vec![id2.clone()]);
        assert_eq!(capacity_scaling_law_check(&t, &id2, &id2, 100, params).unwrap(), Some(0.0));

        let moved = decide_operator_capacity(&t.transformed(&(&id2 * 2.0), &id2).unwrap(), 100, params);
        assert!((moved.capacity_estimate.unwrap() - 16.0).abs() < 1e-9);
        assert!(capacity_scaling_law_check(&t, &(&id2 * 2.0), &id2, 100, params).unwrap().unwrap() < 1e-12);

        for c in [0.5, 3.0] {
            for n in 1..=3 {
                let base = decide_operator_capacity(&op(vec![DMatrix::identity(n, n)]), 100, params);
                let scaled = decide_operator_capacity(&op(vec![DMatrix::identity(n, n) * c]), 100, params);
                let ratio = scaled.capacity_estimate.unwrap() / base.capacity_estimate.unwrap();
                assert!((ratio / c.powi(2 * n as i32) - 1.0).abs() < 1e-12);
            }
        }

        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let b = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 1.0]);
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 1.0]);
        let h = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, -1.0, 3.0]);
        let err = capacity_scaling_law_check(&op(vec![a, b]), &g, &h, 10_000, params).unwrap().unwrap();
        assert!(err < 1e-8, "relative error {err}");
    }

    #[test]
    fn zero_operator_is_skipped_by_scaling_law() {
        let t = op(vec![unit(2, 0, 0), unit(2, 0, 1)]);
        let id = DMatrix::identity(2, 2);
        assert_eq!(capacity_scaling_law_check(&t, &id, &id, 100, CapacityParams::default()).unwrap(), None);
    }
}
