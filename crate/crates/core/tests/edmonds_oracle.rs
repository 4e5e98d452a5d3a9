use proptest::prelude::*;
use quiver_edmonds::fixtures;
use quiver_edmonds::oracle::{span_test, trial_seed};
use quiver_edmonds::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WIDE: SymbolicLimits = SymbolicLimits {
    max_size: 8,
    max_members: 64,
};

/// Random family of `count` dense `n x n` matrices, each of rank at most `rank`.
fn low_rank_family(seed: u64, n: usize, count: usize, rank: usize) -> BlockMatrixFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = (0..count)
        .map(|_| {
            let u = fixtures::random_matrix(&mut rng, n, rank, 2);
            let v = fixtures::random_matrix(&mut rng, rank, n, 2);
            &u * &v
        })
        .collect();
    BlockMatrixFamily::from_dense(n, members).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn randomized_agrees_with_symbolic(seed in any::<u64>(), n in 1usize..5, count in 1usize..5, rank in 0usize..4) {
        let family = low_rank_family(seed, n, count, rank.min(n));
        let params = RandomizedParams { seed, ..RandomizedParams::default() };
        let r = randomized_span_test(&family, params).unwrap();
        let s = symbolic_span_test(&family, WIDE).unwrap();
        prop_assert_eq!(r.answer, s.answer);
        prop_assert!(r.verify(&family));
        prop_assert!(s.verify(&family));
        // Rank-deficient members whose ranks add up to less than N cannot span an invertible.
        if rank.min(n) * count < n {
            prop_assert_eq!(s.answer, Answer::No);
        }
    }

    #[test]
    fn randomized_is_deterministic_in_the_seed(seed in any::<u64>()) {
        let d = fixtures::random_data(&mut ChaCha8Rng::seed_from_u64(seed), 1, 2, 2).pop().unwrap();
        let family = build_block_matrices(&d).unwrap();
        let params = RandomizedParams { seed, ..RandomizedParams::default() };
        prop_assert_eq!(randomized_span_test(&family, params).unwrap(), randomized_span_test(&family, params).unwrap());
    }

    #[test]
    fn auto_mode_answers_like_symbolic(seed in any::<u64>()) {
        let quivers: Vec<_> = fixtures::dynkin_quivers().into_iter().map(std::sync::Arc::new).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = &quivers[rng.gen_range(0..quivers.len())];
        let Some(d) = fixtures::euler_weight_datum(&mut rng, q, 6) else { return Ok(()) };
        let family = build_block_matrices(&d).unwrap();
        let auto = span_test(&family, OracleMode::Auto(WIDE, RandomizedParams::default())).unwrap();
        prop_assert_eq!(auto.method, Method::Symbolic);
        prop_assert_eq!(auto.answer, symbolic_span_test(&family, WIDE).unwrap().answer);
    }
}

#[test]
fn trial_seeds_are_distinct() {
    let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| trial_seed(42, i)).collect();
    assert_eq!(seeds.len(), 1000);
}

#[test]
fn symbolic_cap_is_enforced() {
    let family = low_rank_family(1, 3, 3, 3);
    let tight = SymbolicLimits { max_size: 2, max_members: 64 };
    assert!(matches!(symbolic_span_test(&family, tight), Err(Error::SizeCapExceeded(_))));
    let fallback = span_test(&family, OracleMode::Auto(tight, RandomizedParams::default())).unwrap();
    assert_eq!(fallback.method, Method::Randomized);
}

#[test]
fn too_small_sample_bound_is_rejected() {
    let family = low_rank_family(2, 3, 2, 3);
    let params = RandomizedParams { sample_bound: Some(5), ..RandomizedParams::default() };
    assert!(matches!(randomized_span_test(&family, params), Err(Error::InvalidParameter(_))));
}

#[test]
fn membership_of_multiples() {
    let e = |i, j| RationalMatrix::unit(2, 2, i, j);
    let d = fixtures::kronecker_datum(&[e(0, 0), e(1, 1)]);
    for n in 1..=3 {
        let s = decide_membership(&d, OracleMode::Symbolic(WIDE), n).unwrap();
        assert_eq!((s.answer, s.weight_multiple, s.matrix_size), (Answer::Yes, n, 2 * n as usize));
    }
    assert!(decide_membership(&d, OracleMode::default(), 0).is_err());
}
