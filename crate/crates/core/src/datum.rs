//! Quiver data `(W, sigma)` and the square block-matrix family they define.
//!
//! For a weight `sigma` with positive vertices `v_1..v_n` and negative vertices
//! `w_1..w_m`, the family is indexed by tuples `(i, j, p, q, r)`: a path `p`
//! from `v_i` to `w_j`, a block row `q` owned by `w_j` and a block column `r`
//! owned by `v_i`. The member at that index is the `N x N` matrix carrying
//! `W(p)` in block `(q, r)` and zeros elsewhere. Block rows have height
//! `beta(w_j)` and there are `-sigma(w_j)` of them per negative vertex; block
//! columns have width `beta(v_i)`, `sigma(v_i)` of them per positive vertex.
//!
//! All indices here are zero-based.

use std::ops::Range;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Zero;

use crate::error::{Error, Result};
use crate::quiver::{enumerate_paths, DimensionVector, Path, Quiver, Relation, Weight};
use crate::rational::RationalMatrix;
use crate::representation::Representation;

/// A representation together with a weight satisfying `sigma . beta = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverDatum {
    rep: Representation,
    weight: Weight,
    relations: Vec<Relation>,
}

impl QuiverDatum {
    pub fn new(rep: Representation, weight: Weight) -> Result<Self> {
        if weight.values().len() != rep.quiver().vertex_count() {
            return Err(Error::Shape("weight does not match the quiver".into()));
        }
        let pairing = weight.pair(rep.dim());
        if pairing != 0 {
            return Err(Error::WeightDimensionMismatch { pairing });
        }
        Ok(Self {
            rep,
            weight,
            relations: Vec::new(),
        })
    }

    /// Attaches relations of a bound quiver; the representation must satisfy them.
    pub fn with_relations(mut self, relations: Vec<Relation>) -> Result<Self> {
        if let Some(index) = self.rep.check_relations(&relations).iter().position(|c| !c.passed) {
            return Err(Error::RelationViolated { index });
        }
        self.relations = relations;
        Ok(self)
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn quiver(&self) -> &Quiver {
        self.rep.quiver()
    }

    pub fn dim(&self) -> &DimensionVector {
        self.rep.dim()
    }

    /// The same representation with weight `n sigma`.
    pub fn scaled(&self, n: u32) -> QuiverDatum {
        Self {
            rep: self.rep.clone(),
            weight: self.weight.scaled(n as i64),
            relations: self.relations.clone(),
        }
    }

    /// The datum `(g . W, sigma)`.
    pub fn apply_base_change(&self, g: &[RationalMatrix]) -> Result<QuiverDatum> {
        Ok(Self {
            rep: self.rep.apply_base_change(g)?,
            weight: self.weight.clone(),
            relations: self.relations.clone(),
        })
    }
}

/// Positive and negative parts of a weight and the block layout they induce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSplit {
    /// `v_1..v_n`, in quiver vertex order.
    pub positive: Vec<usize>,
    /// `sigma_+(v_i) = sigma(v_i)`.
    pub sigma_plus: Vec<usize>,
    /// `w_1..w_m`, in quiver vertex order.
    pub negative: Vec<usize>,
    /// `sigma_-(w_j) = -sigma(w_j)`.
    pub sigma_minus: Vec<usize>,
    /// Number of block rows, `M = sum_j sigma_-(w_j)`.
    pub block_rows: usize,
    /// Number of block columns, `M' = sum_i sigma_+(v_i)`.
    pub block_cols: usize,
    /// Matrix size `N`.
    pub size: usize,
    /// `beta(w_j)` for each negative vertex.
    pub negative_dims: Vec<usize>,
    /// `beta(v_i)` for each positive vertex.
    pub positive_dims: Vec<usize>,
}

impl SigmaSplit {
    /// Block rows owned by `w_j` (zero-based `j`).
    pub fn negative_interval(&self, j: usize) -> Range<usize> {
        let start: usize = self.sigma_minus[..j].iter().sum();
        start..start + self.sigma_minus[j]
    }

    /// Block columns owned by `v_i` (zero-based `i`).
    pub fn positive_interval(&self, i: usize) -> Range<usize> {
        let start: usize = self.sigma_plus[..i].iter().sum();
        start..start + self.sigma_plus[i]
    }

    /// Height of every block row, in order.
    pub fn row_heights(&self) -> Vec<usize> {
        expand(&self.sigma_minus, &self.negative_dims)
    }

    /// Width of every block column, in order.
    pub fn col_widths(&self) -> Vec<usize> {
        expand(&self.sigma_plus, &self.positive_dims)
    }
}

fn expand(multiplicity: &[usize], dims: &[usize]) -> Vec<usize> {
    multiplicity
        .iter()
        .zip(dims)
        .flat_map(|(&k, &d)| std::iter::repeat_n(d, k))
        .collect()
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

/// Splits the weight of `d` into its positive and negative parts.
pub fn split_weight(d: &QuiverDatum) -> Result<SigmaSplit> {
    let (sigma, beta) = (d.weight(), d.dim());
    let pairing = sigma.pair(beta);
    if pairing != 0 {
        return Err(Error::WeightDimensionMismatch { pairing });
    }
    let mut split = SigmaSplit {
        positive: Vec::new(),
        sigma_plus: Vec::new(),
        negative: Vec::new(),
        sigma_minus: Vec::new(),
        block_rows: 0,
        block_cols: 0,
        size: 0,
        negative_dims: Vec::new(),
        positive_dims: Vec::new(),
    };
    for (x, &s) in sigma.values().iter().enumerate() {
        if s > 0 {
            split.positive.push(x);
            split.sigma_plus.push(s as usize);
            split.positive_dims.push(beta.get(x));
        } else if s < 0 {
            split.negative.push(x);
            split.sigma_minus.push(s.unsigned_abs() as usize);
            split.negative_dims.push(beta.get(x));
        }
    }
    split.block_rows = split.sigma_minus.iter().sum();
    split.block_cols = split.sigma_plus.iter().sum();
    let from_positive: usize = split.sigma_plus.iter().zip(&split.positive_dims).map(|(s, b)| s * b).sum();
    let from_negative: usize = split.sigma_minus.iter().zip(&split.negative_dims).map(|(s, b)| s * b).sum();
    if from_positive != from_negative {
        return Err(Error::WeightDimensionMismatch {
            pairing: from_positive as i64 - from_negative as i64,
        });
    }
    split.size = from_positive;
    Ok(split)
}

/// Position of a member in the index set: `(i, j, p, q, r)`, all zero-based,
/// with `path` the position of `p` among the paths `v_i -> w_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockIndex {
    pub i: usize,
    pub j: usize,
    pub path: usize,
    pub q: usize,
    pub r: usize,
}

/// One member of the family: a single nonzero block at `(q, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMember {
    pub index: BlockIndex,
    pub row_offset: usize,
    pub col_offset: usize,
    pub block: RationalMatrix,
}

/// The indexed set of `N x N` matrices of a quiver datum, stored sparsely.
#[derive(Clone, Debug)]
pub struct BlockMatrixFamily {
    size: usize,
    row_heights: Vec<usize>,
    col_widths: Vec<usize>,
    members: Vec<BlockMember>,
    labels: Vec<Vec<String>>,
}

// Path labels are informational; two families are equal when every index,
// layout and block agrees.
impl PartialEq for BlockMatrixFamily {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.row_heights == other.row_heights
            && self.col_widths == other.col_widths
            && self.members == other.members
    }
}

impl Eq for BlockMatrixFamily {}

impl BlockMatrixFamily {
    /// Assembles a family from explicit parts, validating the layout.
    pub fn from_parts(
        size: usize,
        row_heights: Vec<usize>,
        col_widths: Vec<usize>,
        members: Vec<BlockMember>,
        labels: Vec<Vec<String>>,
    ) -> Result<Self> {
        if row_heights.iter().sum::<usize>() != size || col_widths.iter().sum::<usize>() != size {
            return Err(Error::Shape(format!("block layout does not add up to N = {size}")));
        }
        if labels.len() != members.len() {
            return Err(Error::Shape("one path label per member required".into()));
        }
        let (rows, cols) = (offsets(&row_heights), offsets(&col_widths));
        for m in &members {
            let (q, r) = (m.index.q, m.index.r);
            if q >= row_heights.len() || r >= col_widths.len() {
                return Err(Error::Shape(format!("block ({q}, {r}) is outside the layout")));
            }
            if m.row_offset != rows[q] || m.col_offset != cols[r] || m.block.shape() != (row_heights[q], col_widths[r]) {
                return Err(Error::Shape(format!("block ({q}, {r}) disagrees with the layout")));
            }
        }
        Ok(Self {
            size,
            row_heights,
            col_widths,
            members,
            labels,
        })
    }

    /// A family whose members are the given `N x N` matrices, each occupying
    /// the whole matrix as one block.
    pub fn from_dense(size: usize, matrices: Vec<RationalMatrix>) -> Result<Self> {
        let mut members = Vec::with_capacity(matrices.len());
        for (k, m) in matrices.into_iter().enumerate() {
            if m.shape() != (size, size) {
                return Err(Error::Shape(format!("member {k} is not {size}x{size}")));
            }
            members.push(BlockMember {
                index: BlockIndex { i: 0, j: 0, path: k, q: 0, r: 0 },
                row_offset: 0,
                col_offset: 0,
                block: m,
            });
        }
        let labels = (0..members.len()).map(|k| vec![format!("m{}", k + 1)]).collect();
        let layout = if size == 0 { Vec::new() } else { vec![size] };
        if size == 0 && !members.is_empty() {
            return Err(Error::Shape("members of a 0x0 family must be empty".into()));
        }
        Self::from_parts(size, layout.clone(), layout, members, labels)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[BlockMember] {
        &self.members
    }

    /// Arrow ids of the path behind each member.
    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn row_heights(&self) -> &[usize] {
        &self.row_heights
    }

    pub fn col_widths(&self) -> &[usize] {
        &self.col_widths
    }

    /// Member `k` as a dense `N x N` matrix.
    pub fn dense(&self, k: usize) -> RationalMatrix {
        let m = &self.members[k];
        let mut out = RationalMatrix::zeros(self.size, self.size);
        place(&mut out, m, &BigRational::from_integer(1.into()));
        out
    }

    /// `sum_k coeffs[k] * A_k` as a dense matrix.
    pub fn combination(&self, coeffs: &[BigRational]) -> RationalMatrix {
        assert_eq!(coeffs.len(), self.members.len(), "one coefficient per member");
        let mut out = RationalMatrix::zeros(self.size, self.size);
        for (m, c) in self.members.iter().zip(coeffs) {
            if !c.is_zero() {
                place(&mut out, m, c);
            }
        }
        out
    }

    /// Integer-coefficient version of [`combination`](Self::combination).
    pub fn integer_combination(&self, coeffs: &[BigInt]) -> RationalMatrix {
        let coeffs: Vec<BigRational> = coeffs.iter().cloned().map(BigRational::from_integer).collect();
        self.combination(&coeffs)
    }

    /// Largest bit length over all numerators and denominators of the blocks.
    pub fn max_bit_length(&self) -> u64 {
        self.members.iter().map(|m| m.block.max_bit_length()).max().unwrap_or(1)
    }
}

fn place(out: &mut RationalMatrix, m: &BlockMember, c: &BigRational) {
    let b = &m.block;
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            let x = b.get(i, j);
            if !x.is_zero() {
                let (r, s) = (m.row_offset + i, m.col_offset + j);
                let v = out.get(r, s) + x * c;
                out.set(r, s, v);
            }
        }
    }
}

/// Builds the block-matrix family of `d`, enumerated in `(i, j, path, q, r)` order.
pub fn build_block_matrices(d: &QuiverDatum) -> Result<BlockMatrixFamily> {
    let split = split_weight(d)?;
    let q = d.quiver();
    let w = d.representation();
    let (heights, widths) = (split.row_heights(), split.col_widths());
    let (rows, cols) = (offsets(&heights), offsets(&widths));
    let mut members = Vec::new();
    let mut labels = Vec::new();
    let mut expected = 0;
    for (i, &v) in split.positive.iter().enumerate() {
        for (j, &u) in split.negative.iter().enumerate() {
            let paths = enumerate_paths(q, v, u);
            expected += paths.len() * split.sigma_minus[j] * split.sigma_plus[i];
            for (pos, p) in paths.iter().enumerate() {
                let value = w.evaluate_path(p);
                let label: Vec<String> = p.ids(q).into_iter().map(String::from).collect();
                for bq in split.negative_interval(j) {
                    for br in split.positive_interval(i) {
                        members.push(BlockMember {
                            index: BlockIndex { i, j, path: pos, q: bq, r: br },
                            row_offset: rows[bq],
                            col_offset: cols[br],
                            block: value.clone(),
                        });
                        labels.push(label.clone());
                    }
                }
            }
        }
    }
    assert_eq!(members.len(), expected, "family size disagrees with the index-set count");
    BlockMatrixFamily::from_parts(split.size, heights, widths, members, labels)
}

/// The bipartite quiver with one arrow per path from a positive to a negative
/// vertex, and the representation sending that arrow to `W(p)`.
#[derive(Clone, Debug)]
pub struct BipartiteReduction {
    pub datum: QuiverDatum,
    /// For each arrow of the reduced quiver, the path of the original quiver it stands for.
    pub paths: Vec<Path>,
}

impl BipartiteReduction {
    pub fn quiver(&self) -> &Quiver {
        self.datum.quiver()
    }

    pub fn representation(&self) -> &Representation {
        self.datum.representation()
    }
}

/// Reduced arrows are named by joining the path's arrow ids with `.`, so a
/// length-one path keeps its arrow's id.
pub fn build_bipartite(d: &QuiverDatum) -> Result<BipartiteReduction> {
    let split = split_weight(d)?;
    let q = d.quiver();
    let w = d.representation();
    let retained: Vec<usize> = (0..q.vertex_count()).filter(|&x| d.weight().get(x) != 0).collect();
    let mut arrows = Vec::new();
    let mut maps = Vec::new();
    let mut paths = Vec::new();
    for &v in &split.positive {
        for &u in &split.negative {
            for p in enumerate_paths(q, v, u) {
                arrows.push((p.ids(q).join("."), q.vertices()[v].clone(), q.vertices()[u].clone()));
                maps.push(w.evaluate_path(&p));
                paths.push(p);
            }
        }
    }
    let vertices: Vec<String> = retained.iter().map(|&x| q.vertices()[x].clone()).collect();
    let reduced = Arc::new(Quiver::new(vertices, arrows)?);
    let dim = DimensionVector::new(&reduced, retained.iter().map(|&x| d.dim().get(x)).collect())?;
    let weight = Weight::new(&reduced, retained.iter().map(|&x| d.weight().get(x)).collect())?;
    let rep = Representation::new(reduced, dim, maps)?;
    Ok(BipartiteReduction {
        datum: QuiverDatum::new(rep, weight)?,
        paths,
    })
}

/// Linear combination of paths, `sum coeff * p`.
pub type PathSum = Vec<(BigRational, Path)>;

/// Substitutes `W` into an `M x M'` array of path combinations.
///
/// Entry `(q, r)` must combine paths from the positive vertex owning column
/// `r` to the negative vertex owning row `q`. Returns `W^f` and `det W^f`.
pub fn schofield_matrix(d: &QuiverDatum, f: &[Vec<PathSum>]) -> Result<(RationalMatrix, BigRational)> {
    let split = split_weight(d)?;
    if f.len() != split.block_rows || f.iter().any(|row| row.len() != split.block_cols) {
        return Err(Error::Shape(format!(
            "expected a {}x{} array of path combinations",
            split.block_rows, split.block_cols
        )));
    }
    let owner_of_row: Vec<usize> = (0..split.negative.len())
        .flat_map(|j| std::iter::repeat_n(j, split.sigma_minus[j]))
        .collect();
    let owner_of_col: Vec<usize> = (0..split.positive.len())
        .flat_map(|i| std::iter::repeat_n(i, split.sigma_plus[i]))
        .collect();
    let (rows, cols) = (offsets(&split.row_heights()), offsets(&split.col_widths()));
    let w = d.representation();
    let mut out = RationalMatrix::zeros(split.size, split.size);
    for (bq, row) in f.iter().enumerate() {
        for (br, entry) in row.iter().enumerate() {
            let (target, source) = (split.negative[owner_of_row[bq]], split.positive[owner_of_col[br]]);
            if let Some((_, p)) = entry.iter().find(|(_, p)| p.source() != source || p.target() != target) {
                return Err(Error::Shape(format!(
                    "entry ({bq}, {br}) holds path {} which does not run {} -> {}",
                    p.ids(d.quiver()).join("."),
                    d.quiver().vertices()[source],
                    d.quiver().vertices()[target]
                )));
            }
            let block = w.evaluate_combination(source, target, entry);
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    out.set(rows[bq] + i, cols[br] + j, block.get(i, j).clone());
                }
            }
        }
    }
    let det = out.determinant()?;
    Ok((out, det))
}
