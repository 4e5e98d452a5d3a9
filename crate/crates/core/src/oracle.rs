//! Exact decision of whether the span of a block-matrix family contains a
//! non-singular matrix.
//!
//! Two routes: a Schwartz-Zippel test that evaluates `det(sum c_k A_k)` at
//! random integer points (one-sided, a YES is always certified), and a full
//! symbolic expansion of the determinant polynomial for small families.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::datum::{build_block_matrices, BlockMatrixFamily, QuiverDatum};
use crate::error::{Error, Result};
use crate::polynomial::Polynomial;
use crate::rational::serialize_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Randomized,
    Symbolic,
}

/// Integer coefficients `c` with `det(sum c_k A_k) != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub coefficients: Vec<u64>,
    #[serde(serialize_with = "serialize_rational")]
    pub determinant: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpanDecision {
    pub answer: Answer,
    pub method: Method,
    /// The weight multiple `n` whose family was tested (`n sigma`).
    pub weight_multiple: u32,
    pub matrix_size: usize,
    pub family_size: usize,
    pub certificate: Option<Certificate>,
    /// Symbolic mode: the determinant polynomial vanished identically.
    pub polynomial_identically_zero: Option<bool>,
    pub polynomial_terms: Option<usize>,
    /// Symbolic mode: the polynomial itself, when it has at most 64 terms.
    pub polynomial: Option<String>,
    /// Randomized mode: number of evaluations performed.
    pub trials_run: Option<usize>,
    pub sample_bound: Option<u64>,
    /// Randomized NO: upper bound `(N / S)^k` on the chance the answer is wrong.
    pub failure_probability: Option<f64>,
}

impl SpanDecision {
    fn base(family: &BlockMatrixFamily, answer: Answer, method: Method) -> Self {
        Self {
            answer,
            method,
            weight_multiple: 1,
            matrix_size: family.size(),
            family_size: family.len(),
            certificate: None,
            polynomial_identically_zero: None,
            polynomial_terms: None,
            polynomial: None,
            trials_run: None,
            sample_bound: None,
            failure_probability: None,
        }
    }

    /// Whether the answer is exact: every YES, and a NO from symbolic expansion
    /// or from an empty family.
    pub fn is_exact(&self) -> bool {
        self.answer.is_yes()
            || self.polynomial_identically_zero == Some(true)
            || self.failure_probability == Some(0.0)
    }

    /// Recomputes the certificate's determinant against `family`.
    pub fn verify(&self, family: &BlockMatrixFamily) -> bool {
        match (&self.answer, &self.certificate) {
            (Answer::Yes, Some(c)) => {
                if c.coefficients.len() != family.len() {
                    return false;
                }
                let coeffs: Vec<BigInt> = c.coefficients.iter().map(|&x| BigInt::from(x)).collect();
                let det = family.integer_combination(&coeffs).determinant().expect("family members are square");
                !det.is_zero() && det == c.determinant
            }
            (Answer::Yes, None) => false,
            (Answer::No, _) => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomizedParams {
    pub trials: usize,
    /// Coefficients are drawn from `0..sample_bound`; `None` means `2N`.
    pub sample_bound: Option<u64>,
    pub seed: u64,
}

impl Default for RandomizedParams {
    fn default() -> Self {
        Self {
            trials: 40,
            sample_bound: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolicLimits {
    pub max_size: usize,
    pub max_members: usize,
}

impl Default for SymbolicLimits {
    fn default() -> Self {
        Self {
            max_size: 8,
            max_members: 12,
        }
    }
}

impl SymbolicLimits {
    pub fn admits(&self, family: &BlockMatrixFamily) -> bool {
        family.size() <= self.max_size && family.len() <= self.max_members
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    Randomized(RandomizedParams),
    Symbolic(SymbolicLimits),
    /// Symbolic when the family fits the limits, randomized otherwise.
    Auto(SymbolicLimits, RandomizedParams),
}

impl Default for OracleMode {
    fn default() -> Self {
        OracleMode::Auto(SymbolicLimits::default(), RandomizedParams::default())
    }
}

/// Seed of trial `i`: the splitmix64 stream started at `master`, advanced `i + 1` times.
pub fn trial_seed(master: u64, i: u64) -> u64 {
    let mut z = master.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(i + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn draw(family: &BlockMatrixFamily, bound: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..family.len()).map(|_| rng.gen_range(0..bound)).collect()
}

fn evaluate(family: &BlockMatrixFamily, coeffs: &[u64]) -> BigRational {
    let coeffs: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
    family.integer_combination(&coeffs).determinant().expect("family members are square")
}

/// Schwartz-Zippel test of `det(sum t_k A_k) != 0` with `trials` random points
/// drawn from `{0, ..., S-1}^|F|`.
pub fn randomized_span_test(family: &BlockMatrixFamily, params: RandomizedParams) -> Result<SpanDecision> {
    let n = family.size();
    if n == 0 {
        let mut d = SpanDecision::base(family, Answer::Yes, Method::Randomized);
        d.certificate = Some(Certificate {
            coefficients: vec![0; family.len()],
            determinant: BigRational::one(),
        });
        d.trials_run = Some(0);
        return Ok(d);
    }
    if params.trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    let bound = params.sample_bound.unwrap_or(2 * n as u64);
    if bound < 2 * n as u64 {
        return Err(Error::InvalidParameter(format!(
            "sample bound {bound} is below 2N = {}",
            2 * n
        )));
    }
    let mut decision = SpanDecision::base(family, Answer::No, Method::Randomized);
    decision.sample_bound = Some(bound);
    if family.is_empty() {
        decision.trials_run = Some(0);
        decision.failure_probability = Some(0.0);
        return Ok(decision);
    }
    for i in 0..params.trials {
        let coeffs = draw(family, bound, trial_seed(params.seed, i as u64));
        let det = evaluate(family, &coeffs);
        if !det.is_zero() {
            decision.answer = Answer::Yes;
            decision.trials_run = Some(i + 1);
            decision.certificate = Some(Certificate {
                coefficients: coeffs,
                determinant: det,
            });
            return Ok(decision);
        }
    }
    decision.trials_run = Some(params.trials);
    decision.failure_probability = Some((n as f64 / bound as f64).powi(params.trials as i32));
    Ok(decision)
}

/// `det(sum_k t_k A_k)` as a polynomial in `t_1..t_|F|`.
///
/// Laplace expansion row by row, memoised on the set of used columns, and
/// only through structurally nonzero cells.
pub fn determinant_polynomial(family: &BlockMatrixFamily) -> Polynomial {
    let n = family.size();
    assert!(n <= 63, "column sets are tracked in a u64");
    let mut cells: HashMap<(usize, usize), Vec<(usize, BigRational)>> = HashMap::new();
    for (k, m) in family.members().iter().enumerate() {
        let b = &m.block;
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                let x = b.get(i, j);
                if !x.is_zero() {
                    cells.entry((m.row_offset + i, m.col_offset + j)).or_default().push((k, x.clone()));
                }
            }
        }
    }
    let one = BigRational::one();
    let minus_one = -BigRational::one();
    let mut layer: HashMap<u64, Polynomial> = HashMap::from([(0, Polynomial::one())]);
    for row in 0..n {
        let mut next: HashMap<u64, Polynomial> = HashMap::new();
        for (mask, poly) in &layer {
            for col in 0..n {
                if mask & (1 << col) != 0 {
                    continue;
                }
                let Some(linear) = cells.get(&(row, col)) else {
                    continue;
                };
                // Inversions added by placing `col` after the columns already used.
                let inversions = (mask >> (col + 1)).count_ones();
                let sign = if inversions % 2 == 0 { &one } else { &minus_one };
                next.entry(mask | (1 << col))
                    .or_default()
                    .add_product_with_linear(poly, linear, sign);
            }
        }
        next.retain(|_, p| !p.is_zero());
        layer = next;
    }
    let full = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    layer.remove(&full).unwrap_or_else(Polynomial::zero)
}

/// Exact test by expanding the determinant polynomial.
///
/// A YES comes with an integer certificate found by evaluating at seeded
/// random points.
pub fn symbolic_span_test(family: &BlockMatrixFamily, limits: SymbolicLimits) -> Result<SpanDecision> {
    if !limits.admits(family) {
        return Err(Error::SizeCapExceeded(format!(
            "N = {} and |F| = {} exceed the caps N <= {} and |F| <= {}",
            family.size(),
            family.len(),
            limits.max_size,
            limits.max_members
        )));
    }
    let poly = determinant_polynomial(family);
    let mut decision = SpanDecision::base(family, Answer::No, Method::Symbolic);
    decision.polynomial_identically_zero = Some(poly.is_zero());
    decision.polynomial_terms = Some(poly.term_count());
    if poly.term_count() <= 64 {
        decision.polynomial = Some(poly.to_string());
    }
    if !poly.is_zero() {
        decision.answer = Answer::Yes;
        decision.certificate = Some(find_certificate(family, &poly));
    }
    Ok(decision)
}

fn find_certificate(family: &BlockMatrixFamily, poly: &Polynomial) -> Certificate {
    // Each draw from {0..2N+1}^|F| misses with probability below 1/2.
    let bound = 2 * family.size() as u64 + 2;
    for i in 0.. {
        let coeffs = draw(family, bound << (i / 64), trial_seed(0x5eed, i));
        let point: Vec<BigRational> = coeffs.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        if !poly.evaluate(&point).is_zero() {
            let det = evaluate(family, &coeffs);
            debug_assert!(!det.is_zero());
            return Certificate {
                coefficients: coeffs,
                determinant: det,
            };
        }
    }
    unreachable!("a nonzero polynomial has a nonzero integer point")
}

/// Runs the selected test on a family.
pub fn span_test(family: &BlockMatrixFamily, mode: OracleMode) -> Result<SpanDecision> {
    match mode {
        OracleMode::Randomized(p) => randomized_span_test(family, p),
        OracleMode::Symbolic(l) => symbolic_span_test(family, l),
        OracleMode::Auto(l, p) => {
            if l.admits(family) {
                symbolic_span_test(family, l)
            } else {
                randomized_span_test(family, p)
            }
        }
    }
}

/// Decides whether `n sigma` lies in the orbit semigroup of `W` by testing the
/// family of `(W, n sigma)`.
pub fn decide_membership(d: &QuiverDatum, mode: OracleMode, multiple: u32) -> Result<SpanDecision> {
    if multiple == 0 {
        return Err(Error::InvalidParameter("weight multiple must be at least 1".into()));
    }
    let family = build_block_matrices(&d.scaled(multiple))?;
    let mut decision = span_test(&family, mode)?;
    decision.weight_multiple = multiple;
    Ok(decision)
}
