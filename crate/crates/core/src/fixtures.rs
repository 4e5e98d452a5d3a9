//! Small quivers, representations and data used across the test suites.
//!
//! Vertices are named `"1"`, `"2"`, ...; arrows `"a1"`, `"a2"`, ... unless
//! noted otherwise.

use std::sync::Arc;

use rand::Rng;

use crate::datum::{build_block_matrices, split_weight, QuiverDatum};
use crate::quiver::{euler_matrix, DimensionVector, Path, Quiver, Relation, Weight};
use crate::rational::{int, RationalMatrix};
use crate::representation::Representation;

/// Equioriented `A_n`: `1 -> 2 -> ... -> n`.
pub fn linear_quiver(n: usize) -> Quiver {
    a_quiver(&vec![true; n.saturating_sub(1)])
}

/// `A_n` with arrow `a_k` pointing `k -> k+1` when `forward[k-1]`, else `k+1 -> k`.
pub fn a_quiver(forward: &[bool]) -> Quiver {
    let n = forward.len() + 1;
    let vertices: Vec<String> = (1..=n).map(|v| v.to_string()).collect();
    let arrows: Vec<(String, String, String)> = forward
        .iter()
        .enumerate()
        .map(|(k, &f)| {
            let (s, t) = ((k + 1).to_string(), (k + 2).to_string());
            let (tail, head) = if f { (s, t) } else { (t, s) };
            (format!("a{}", k + 1), tail, head)
        })
        .collect();
    Quiver::new(vertices, arrows).expect("A_n is acyclic")
}

/// Kronecker quiver `K_l`: `l` parallel arrows `1 -> 2`.
pub fn kronecker_quiver(l: usize) -> Quiver {
    Quiver::new(["1", "2"], (1..=l).map(|k| (format!("a{k}"), "1", "2"))).expect("K_l is acyclic")
}

/// `D_4` with leaves `1, 2, 3` and center `4`; arrow `a_k` points into the
/// center when `inward[k-1]`.
pub fn d4_quiver(inward: [bool; 3]) -> Quiver {
    let arrows: Vec<(String, String, String)> = inward
        .iter()
        .enumerate()
        .map(|(k, &inw)| {
            let leaf = (k + 1).to_string();
            let (tail, head) = if inw { (leaf, "4".to_string()) } else { ("4".to_string(), leaf) };
            (format!("a{}", k + 1), tail, head)
        })
        .collect();
    Quiver::new(["1", "2", "3", "4"], arrows).expect("D_4 is acyclic")
}

/// Five-vertex quiver with arrows `a: 2->1, b: 3->2, c: 3->1, d: 5->3, e: 4->3`,
/// bound by the single relation "b then a".
pub fn wild_schur_tame_quiver() -> Quiver {
    Quiver::new(
        ["1", "2", "3", "4", "5"],
        [("a", "2", "1"), ("b", "3", "2"), ("c", "3", "1"), ("d", "5", "3"), ("e", "4", "3")],
    )
    .expect("acyclic")
}

/// The relation `1 * (b then a)`.
pub fn wild_schur_tame_relation(q: &Quiver) -> Relation {
    Relation::new(vec![(int(1), Path::from_ids(q, &["b", "a"]).expect("b then a composes"))]).expect("valid relation")
}

/// A thin representation satisfying the relation, with `W(a) = 0`.
pub fn wild_schur_tame_representation() -> Representation {
    let q = Arc::new(wild_schur_tame_quiver());
    let dim = DimensionVector::new(&q, vec![1; 5]).expect("five vertices");
    let maps = [0, 2, 3, 5, 7].iter().map(|&x| RationalMatrix::from_i64(1, 1, &[x])).collect();
    Representation::new(q, dim, maps).expect("thin representation")
}

/// Every orientation of `A_2`, `A_3`, `A_4` and `D_4`.
pub fn dynkin_quivers() -> Vec<Quiver> {
    let mut out = Vec::new();
    for len in 1..=3 {
        for mask in 0..(1u32 << len) {
            let forward: Vec<bool> = (0..len).map(|k| mask & (1 << k) == 0).collect();
            out.push(a_quiver(&forward));
        }
    }
    for mask in 0..8u32 {
        out.push(d4_quiver([mask & 1 == 0, mask & 2 == 0, mask & 4 == 0]));
    }
    out
}

/// Quivers with at most six vertices used by property tests.
pub fn small_quivers() -> Vec<Quiver> {
    let mut out = vec![
        linear_quiver(2),
        linear_quiver(3),
        a_quiver(&[true, false]),
        a_quiver(&[false, true, true]),
        d4_quiver([true, true, true]),
        d4_quiver([true, false, true]),
        kronecker_quiver(2),
        kronecker_quiver(3),
        wild_schur_tame_quiver(),
    ];
    // Diamond with a bypass: two routes 1 -> 4 plus a direct arrow.
    out.push(
        Quiver::new(
            ["1", "2", "3", "4"],
            [("a1", "1", "2"), ("a2", "1", "3"), ("a3", "2", "4"), ("a4", "3", "4"), ("a5", "1", "4")],
        )
        .expect("acyclic"),
    );
    // Six vertices, a longer chain with a double arrow.
    out.push(
        Quiver::new(
            ["1", "2", "3", "4", "5", "6"],
            [
                ("a1", "1", "2"),
                ("a2", "2", "3"),
                ("a3", "2", "3"),
                ("a4", "3", "4"),
                ("a5", "5", "4"),
                ("a6", "4", "6"),
                ("a7", "1", "6"),
            ],
        )
        .expect("acyclic"),
    );
    out
}

/// `K_l` datum with `beta = (N, N)`, `sigma = (1, -1)` and `W(a_k) = matrices[k]`.
pub fn kronecker_datum(matrices: &[RationalMatrix]) -> QuiverDatum {
    let n = matrices.first().map_or(0, RationalMatrix::rows);
    let q = Arc::new(kronecker_quiver(matrices.len()));
    let dim = DimensionVector::new(&q, vec![n, n]).expect("two vertices");
    let rep = Representation::new(q.clone(), dim, matrices.to_vec()).expect("square matrices of one size");
    QuiverDatum::new(rep, Weight::new(&q, vec![1, -1]).expect("two vertices")).expect("pairing is zero")
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, max_entry: i64) -> RationalMatrix {
    RationalMatrix::from_fn(rows, cols, |_, _| int(rng.gen_range(-max_entry..=max_entry)))
}

/// Random integer representation with the given dimension vector.
pub fn random_representation_with_dim<R: Rng>(rng: &mut R, q: &Arc<Quiver>, dim: DimensionVector, max_entry: i64) -> Representation {
    let maps = q
        .arrows()
        .iter()
        .map(|a| random_matrix(rng, dim.get(a.head), dim.get(a.tail), max_entry))
        .collect();
    Representation::new(q.clone(), dim, maps).expect("shapes follow the dimension vector")
}

/// Random representation with `beta(x)` drawn from `0..=max_dim`.
pub fn random_representation<R: Rng>(rng: &mut R, q: &Arc<Quiver>, max_dim: usize, max_entry: i64) -> Representation {
    let dim = DimensionVector::new(q, (0..q.vertex_count()).map(|_| rng.gen_range(0..=max_dim)).collect()).expect("one entry per vertex");
    random_representation_with_dim(rng, q, dim, max_entry)
}

/// Random base change with entries in `-2..=2`, redrawn until invertible.
pub fn random_base_change<R: Rng>(rng: &mut R, dim: &DimensionVector) -> Vec<RationalMatrix> {
    dim.values()
        .iter()
        .map(|&d| loop {
            let g = random_matrix(rng, d, d, 2);
            if g.inverse().is_ok() {
                break g;
            }
        })
        .collect()
}

/// Random nonzero weight with entries in `-max_weight..=max_weight` and
/// `sigma . beta = 0`, or `None` if a few hundred draws find none.
pub fn random_weight<R: Rng>(rng: &mut R, q: &Quiver, dim: &DimensionVector, max_weight: i64) -> Option<Weight> {
    for _ in 0..500 {
        let sigma: Vec<i64> = (0..q.vertex_count()).map(|_| rng.gen_range(-max_weight..=max_weight)).collect();
        let w = Weight::new(q, sigma).expect("one entry per vertex");
        if !w.is_zero() && w.pair(dim) == 0 {
            return Some(w);
        }
    }
    None
}

/// `count` random data over [`small_quivers`] with `beta(x) <= max_dim`
/// (at least one) and weights bounded by `max_weight`.
pub fn random_data<R: Rng>(rng: &mut R, count: usize, max_dim: usize, max_weight: i64) -> Vec<QuiverDatum> {
    let quivers: Vec<Arc<Quiver>> = small_quivers().into_iter().map(Arc::new).collect();
    random_data_over(rng, &quivers, count, max_dim, max_weight, usize::MAX)
}

/// Random data over the given quivers, keeping only those with matrix size
/// at most `max_size`.
pub fn random_data_over<R: Rng>(
    rng: &mut R,
    quivers: &[Arc<Quiver>],
    count: usize,
    max_dim: usize,
    max_weight: i64,
    max_size: usize,
) -> Vec<QuiverDatum> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let q = &quivers[rng.gen_range(0..quivers.len())];
        let dim = DimensionVector::new(q, (0..q.vertex_count()).map(|_| rng.gen_range(1..=max_dim)).collect()).expect("one entry per vertex");
        let Some(sigma) = random_weight(rng, q, &dim, max_weight) else {
            continue;
        };
        let rep = random_representation_with_dim(rng, q, dim, 2);
        let d = QuiverDatum::new(rep, sigma).expect("pairing is zero");
        if split_weight(&d).expect("valid datum").size <= max_size {
            out.push(d);
        }
    }
    out
}

/// Random datum whose weight is `<alpha, ->` for some `alpha` in `{0,1,2}^n`,
/// with `beta(x) <= 2`, a nonempty block family and matrix size at most `max_size`.
/// Such weights are the ones most likely to admit invariants.
pub fn euler_weight_datum<R: Rng>(rng: &mut R, q: &Arc<Quiver>, max_size: usize) -> Option<QuiverDatum> {
    let e = euler_matrix(q);
    let n = q.vertex_count();
    for _ in 0..500 {
        let beta: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
        let alpha: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let sigma: Vec<i64> = (0..n).map(|y| (0..n).map(|x| alpha[x] * e[x][y]).sum()).collect();
        let dim = DimensionVector::new(q, beta).expect("one entry per vertex");
        let w = Weight::new(q, sigma).expect("one entry per vertex");
        if w.is_zero() || w.pair(&dim) != 0 {
            continue;
        }
        let rep = random_representation_with_dim(rng, q, dim, 2);
        let d = QuiverDatum::new(rep, w).expect("pairing is zero");
        let family = build_block_matrices(&d).expect("valid datum");
        if family.size() <= max_size && !family.is_empty() {
            return Some(d);
        }
    }
    None
}

/// A fixed list of data over Dynkin quivers and `K_2`, all with `beta(x) <= 2`
/// and matrix size at most 6. Every weight here is saturated for its
/// representation, so the exact and capacity answers must coincide.
pub fn saturated_suite() -> Vec<QuiverDatum> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_d1a9);
    let mut quivers: Vec<Arc<Quiver>> = dynkin_quivers().into_iter().map(Arc::new).collect();
    quivers.push(Arc::new(kronecker_quiver(2)));
    let mut out = Vec::new();
    for q in &quivers {
        out.extend(random_data_over(&mut rng, std::slice::from_ref(q), 2, 2, 2, 6));
        out.extend(euler_weight_datum(&mut rng, q, 6));
    }
    // Hand-picked cases with known answers on both sides.
    let e = |i, j| RationalMatrix::unit(2, 2, i, j);
    out.push(kronecker_datum(&[e(0, 0), e(1, 1)]));
    out.push(kronecker_datum(&[e(0, 0), e(0, 1)]));
    out.push(kronecker_datum(&[RationalMatrix::from_i64(2, 2, &[1, 2, 3, 4]), RationalMatrix::from_i64(2, 2, &[0, 1, 1, 0])]));
    let a2 = Arc::new(linear_quiver(2));
    let dim = DimensionVector::new(&a2, vec![1, 2]).expect("two vertices");
    let rep = Representation::new(a2.clone(), dim, vec![RationalMatrix::from_i64(2, 1, &[1, 2])]).expect("2x1 map");
    out.push(QuiverDatum::new(rep, Weight::new(&a2, vec![2, -1]).expect("two vertices")).expect("pairing is zero"));
    out
}
