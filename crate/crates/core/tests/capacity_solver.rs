mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use quiver_edmonds::capacity::decide_operator_capacity;
use quiver_edmonds::fixtures;
use quiver_edmonds::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn op(kraus: Vec<DMatrix<f64>>) -> CpOperator {
    CpOperator::new(kraus[0].nrows(), kraus).unwrap()
}

fn small_matrix() -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-3i32..=3, 4).prop_map(|v| DMatrix::from_iterator(2, 2, v.into_iter().map(f64::from)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn estimate_matches_grid_minimum(a in small_matrix(), b in small_matrix()) {
        let operator = op(vec![a.clone(), b.clone()]);
        let report = decide_operator_capacity(&operator, 20_000, CapacityParams::default());
        let grid = common::grid_capacity_2x2(&[a, b]);
        match report.decision {
            ScalingStatus::Positive => {
                let est = report.capacity_estimate.unwrap();
                prop_assert!((est - grid).abs() <= 1e-4 * grid.max(1.0), "estimate {} grid {}", est, grid);
            }
            ScalingStatus::Zero => prop_assert!(grid < 1e-6, "zero decision but grid minimum {}", grid),
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    #[test]
    fn distance_never_grows(seed in any::<u64>()) {
        let d = fixtures::random_data(&mut ChaCha8Rng::seed_from_u64(seed), 1, 2, 2).pop().unwrap();
        let report = decide_capacity(&build_block_matrices(&d).unwrap(), CapacityParams::default());
        prop_assert_eq!(report.diagnostics.monotonicity_violations, 0);
        for w in report.diagnostics.ds_history.windows(2).skip(1) {
            prop_assert!(w[1] <= w[0] + 1e-9);
        }
    }
}

#[test]
fn kronecker_pair_capacity() {
    let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
    let b = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let report = decide_operator_capacity(&op(vec![a.clone(), b.clone()]), 10_000, CapacityParams::default());
    assert_eq!(report.decision, ScalingStatus::Positive);
    let grid = common::grid_capacity_2x2(&[a, b]);
    let est = report.capacity_estimate.unwrap();
    assert!((est - grid).abs() < 1e-4 * grid, "estimate {est}, grid {grid}");
    assert!(report.final_ds < 1e-20);
}

#[test]
fn scaling_law_holds() {
    let a = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 2.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0]);
    let b = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 2.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
    let g = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
    let h = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 1.0, 3.0, 0.0, 0.0, 1.0, 1.0]);
    let gap = capacity_scaling_law_check(&op(vec![a, b]), &g, &h, 10_000, CapacityParams::default())
        .unwrap()
        .expect("both runs positive");
    assert!(gap < 1e-8, "relative gap {gap}");
}

#[test]
fn common_kernel_forces_zero() {
    // Every Kraus matrix kills e_3, so T*(I) is singular.
    let mut kraus = Vec::new();
    for s in 0..3 {
        let mut m = DMatrix::from_fn(3, 3, |i, j| ((i + 2 * j + s) % 3) as f64);
        m.set_column(2, &nalgebra::DVector::zeros(3));
        kraus.push(m);
    }
    let report = decide_operator_capacity(&op(kraus), 10_000, CapacityParams::default());
    assert_eq!(report.decision, ScalingStatus::Zero);
    assert_eq!(report.capacity_estimate, None);
}

#[test]
fn scaled_operator_keeps_its_decision() {
    // Uniformly shrinking the Kraus matrices must not be mistaken for a collapse.
    for s in [1e-6, 1.0, 1e6] {
        let kraus = vec![common::unit(2, 0, 0) * s, common::unit(2, 1, 1) * s];
        let report = decide_operator_capacity(&op(kraus), 10_000, CapacityParams::default());
        assert_eq!(report.decision, ScalingStatus::Positive);
        let expected = s.powi(4);
        assert!((report.capacity_estimate.unwrap() / expected - 1.0).abs() < 1e-6);
    }
}

#[test]
fn iteration_budget_yields_inconclusive() {
    let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
    let b = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let params = CapacityParams { threshold: Some(1e-30), ..CapacityParams::default() };
    let report = decide_operator_capacity(&op(vec![a, b]), 3, params);
    assert_eq!((report.decision, report.iterations), (ScalingStatus::Inconclusive, 3));
}

#[test]
fn empty_family_has_zero_capacity() {
    let family = BlockMatrixFamily::from_parts(2, vec![2], vec![2], vec![], vec![]).unwrap();
    assert_eq!(decide_capacity(&family, CapacityParams::default()).decision, ScalingStatus::Zero);
}
