use std::sync::Arc;

use proptest::prelude::*;
use quiver_edmonds::fixtures;
use quiver_edmonds::representation::hom_ext_dims;
use quiver_edmonds::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_form_is_hom_minus_ext(seed in any::<u64>()) {
        let quivers: Vec<Arc<Quiver>> = fixtures::small_quivers().into_iter().map(Arc::new).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = &quivers[rng.gen_range(0..quivers.len())];
        let v = fixtures::random_representation(&mut rng, q, 3, 2);
        let w = fixtures::random_representation(&mut rng, q, 3, 2);
        let (hom, ext) = hom_ext_dims(&v, &w, &[]).unwrap();
        let euler = euler_form(q, &v.dim().as_integers(), &w.dim().as_integers(), &[]).unwrap();
        prop_assert_eq!(hom as i64 - ext as i64, euler);
    }

    #[test]
    fn euler_matrix_agrees_with_form(seed in any::<u64>()) {
        let quivers = fixtures::small_quivers();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = &quivers[rng.gen_range(0..quivers.len())];
        let n = q.vertex_count();
        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let b: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let e = euler_matrix(q);
        let direct: i64 = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| a[x] * e[x][y] * b[y]).sum();
        prop_assert_eq!(euler_form(q, &a, &b, &[]).unwrap(), direct);
    }
}

#[test]
fn cycles_and_bad_ids_are_rejected() {
    let cycle = Quiver::new(["x", "y", "z"], [("a", "x", "y"), ("b", "y", "z"), ("c", "z", "x")]).unwrap_err();
    assert!(matches!(cycle, Error::Cycle { .. }));
    let dangling = Quiver::new(["x"], [("a", "x", "w")]).unwrap_err();
    assert_eq!(dangling, Error::DanglingId { kind: "vertex", id: "w".into() });
    let duplicate = Quiver::new(["x", "x"], Vec::<(&str, &str, &str)>::new()).unwrap_err();
    assert!(matches!(duplicate, Error::DuplicateId { .. }));
}

#[test]
fn hom_from_simple_projective() {
    // On 1 -> 2 the simple at 2 is projective, so Ext(S2, -) vanishes.
    let q = Arc::new(fixtures::linear_quiver(2));
    let s2 = Representation::zero(q.clone(), DimensionVector::new(&q, vec![0, 1]).unwrap());
    let w = Representation::new(
        q.clone(),
        DimensionVector::new(&q, vec![1, 1]).unwrap(),
        vec![RationalMatrix::from_i64(1, 1, &[1])],
    )
    .unwrap();
    assert_eq!(hom_ext_dims(&s2, &w, &[]).unwrap(), (1, 0));
    assert_eq!(hom_ext_dims(&w, &s2, &[]).unwrap(), (0, 0));
}

#[test]
fn relations_block_the_euler_form() {
    let q = fixtures::wild_schur_tame_quiver();
    let r = fixtures::wild_schur_tame_relation(&q);
    assert_eq!(euler_form(&q, &[1; 5], &[1; 5], &[r]).unwrap_err(), Error::BoundAlgebraUnsupported);
}
