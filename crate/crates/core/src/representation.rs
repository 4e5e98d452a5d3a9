//! Representations of a quiver over the rationals, and the operations that
//! only need the hereditary path algebra: Hom/Ext¹ dimensions and base change.

use std::sync::Arc;

use num::rational::BigRational;
use num::traits::Zero;

use crate::error::{Error, Result};
use crate::quiver::{DimensionVector, Path, Quiver, Relation};
use crate::rational::RationalMatrix;

/// One matrix per arrow, of shape `beta(head) x beta(tail)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    quiver: Arc<Quiver>,
    dim: DimensionVector,
    maps: Vec<RationalMatrix>,
}

impl Representation {
    pub fn new(quiver: Arc<Quiver>, dim: DimensionVector, maps: Vec<RationalMatrix>) -> Result<Self> {
        if dim.values().len() != quiver.vertex_count() {
            return Err(Error::Shape("dimension vector does not match the quiver".into()));
        }
        if maps.len() != quiver.arrow_count() {
            return Err(Error::Shape(format!(
                "{} matrices for {} arrows",
                maps.len(),
                quiver.arrow_count()
            )));
        }
        for (a, m) in quiver.arrows().iter().zip(&maps) {
            let expected = (dim.get(a.head), dim.get(a.tail));
            if m.shape() != expected {
                return Err(Error::Shape(format!(
                    "arrow `{}` carries a {}x{} matrix, expected {}x{}",
                    a.id,
                    m.rows(),
                    m.cols(),
                    expected.0,
                    expected.1
                )));
            }
        }
        Ok(Self { quiver, dim, maps })
    }

    /// All maps zero.
    pub fn zero(quiver: Arc<Quiver>, dim: DimensionVector) -> Self {
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| RationalMatrix::zeros(dim.get(a.head), dim.get(a.tail)))
            .collect();
        Self { quiver, dim, maps }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn quiver_arc(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn dim(&self) -> &DimensionVector {
        &self.dim
    }

    pub fn maps(&self) -> &[RationalMatrix] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &RationalMatrix {
        &self.maps[arrow]
    }

    /// `W(p) = W(a_k) ... W(a_1)` where `a_1` is traversed first.
    pub fn evaluate_path(&self, p: &Path) -> RationalMatrix {
        let mut arrows = p.arrows().iter();
        let first = *arrows.next().expect("paths are non-empty");
        arrows.fold(self.maps[first].clone(), |acc, &a| &self.maps[a] * &acc)
    }

    /// `sum coeff * W(path)` over `terms`, all of which run `source -> target`.
    pub fn evaluate_combination(&self, source: usize, target: usize, terms: &[(BigRational, Path)]) -> RationalMatrix {
        let mut acc = RationalMatrix::zeros(self.dim.get(target), self.dim.get(source));
        for (c, p) in terms {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &self.evaluate_path(p).scale(c);
        }
        acc
    }

    /// Residual `sum coeff * W(path)` of each relation; a relation holds when it is zero.
    pub fn check_relations(&self, relations: &[Relation]) -> Vec<RelationCheck> {
        relations
            .iter()
            .map(|r| {
                let residual = self.evaluate_combination(r.source(), r.target(), r.terms());
                RelationCheck {
                    passed: residual.is_zero(),
                    residual,
                }
            })
            .collect()
    }

    /// `g . W` with `(g . W)(a) = g(ha) W(a) g(ta)^{-1}`; `g` is indexed by vertex.
    pub fn apply_base_change(&self, g: &[RationalMatrix]) -> Result<Representation> {
        if g.len() != self.quiver.vertex_count() {
            return Err(Error::Shape(format!(
                "{} base-change matrices for {} vertices",
                g.len(),
                self.quiver.vertex_count()
            )));
        }
        let mut inverses = Vec::with_capacity(g.len());
        for (v, gv) in g.iter().enumerate() {
            let d = self.dim.get(v);
            if gv.shape() != (d, d) {
                return Err(Error::Shape(format!(
                    "base change at `{}` must be {d}x{d}",
                    self.quiver.vertices()[v]
                )));
            }
            inverses.push(gv.inverse().map_err(|_| Error::SingularBaseChange {
                vertex: self.quiver.vertices()[v].clone(),
            })?);
        }
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| &(&g[a.head] * m) * &inverses[a.tail])
            .collect();
        Ok(Self {
            quiver: self.quiver.clone(),
            dim: self.dim.clone(),
            maps,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub passed: bool,
    pub residual: RationalMatrix,
}

/// `(dim Hom(V, W), dim Ext¹(V, W))` over the path algebra.
///
/// Both are read off the map
/// `Phi: (+)_x Hom(V(x), W(x)) -> (+)_a Hom(V(ta), W(ha))`,
/// `Phi(f)_a = W(a) f(ta) - f(ha) V(a)`, as its kernel and cokernel.
pub fn hom_ext_dims(v: &Representation, w: &Representation, relations: &[Relation]) -> Result<(usize, usize)> {
    if !relations.is_empty() {
        return Err(Error::BoundAlgebraUnsupported);
    }
    if v.quiver() != w.quiver() {
        return Err(Error::Shape("representations live on different quivers".into()));
    }
    let q = v.quiver();
    let (dv, dw) = (v.dim(), w.dim());

    // Coordinates of f: block per vertex x, entry (k, l) of the dw(x) x dv(x) matrix f(x).
    let mut domain_offset = Vec::with_capacity(q.vertex_count());
    let mut domain = 0;
    for x in 0..q.vertex_count() {
        domain_offset.push(domain);
        domain += dw.get(x) * dv.get(x);
    }
    let mut codomain_offset = Vec::with_capacity(q.arrow_count());
    let mut codomain = 0;
    for a in q.arrows() {
        codomain_offset.push(codomain);
        codomain += dw.get(a.head) * dv.get(a.tail);
    }

    let mut phi = RationalMatrix::zeros(codomain, domain);
    for (ai, a) in q.arrows().iter().enumerate() {
        let (t, h) = (a.tail, a.head);
        let (wa, va) = (w.map(ai), v.map(ai));
        let width = dv.get(t);
        // W(a) f(t): entry (i, j) gets W(a)[i][k] from f(t)[k][j].
        for k in 0..dw.get(t) {
            for j in 0..dv.get(t) {
                let col = domain_offset[t] + k * dv.get(t) + j;
                for i in 0..dw.get(h) {
                    let c = wa.get(i, k);
                    if !c.is_zero() {
                        let row = codomain_offset[ai] + i * width + j;
                        let x = phi.get(row, col) + c;
                        phi.set(row, col, x);
                    }
                }
            }
        }
        // - f(h) V(a): entry (i, j) gets f(h)[i][l] V(a)[l][j].
        for i in 0..dw.get(h) {
            for l in 0..dv.get(h) {
                let col = domain_offset[h] + i * dv.get(h) + l;
                for j in 0..dv.get(t) {
                    let c = va.get(l, j);
                    if !c.is_zero() {
                        let row = codomain_offset[ai] + i * width + j;
                        let x = phi.get(row, col) - c;
                        phi.set(row, col, x);
                    }
                }
            }
        }
    }
    let rank = phi.rank();
    Ok((domain - rank, codomain - rank))
}

/// Identity base change for `dim`.
pub fn identity_base_change(dim: &DimensionVector) -> Vec<RationalMatrix> {
    dim.values().iter().map(|&d| RationalMatrix::identity(d)).collect()
}

/// Pointwise product `(g h)(x) = g(x) h(x)`.
pub fn compose_base_change(g: &[RationalMatrix], h: &[RationalMatrix]) -> Vec<RationalMatrix> {
    g.iter().zip(h).map(|(a, b)| a * b).collect()
}
