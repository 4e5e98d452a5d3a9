//! JSON instance and family documents.
//!
//! Matrix entries are exact: integers, or strings `"p"` / `"p/q"`. Floats are
//! accepted only when the caller opts into inexact input. Paths list arrows in
//! traversal order, so `["b", "a"]` evaluates to `W(a) W(b)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::rational::BigRational;
use num::BigInt;
use quiver_edmonds::rational::{format_rational, parse_rational};
use quiver_edmonds::{
    split_weight, BlockIndex, BlockMatrixFamily, BlockMember, DimensionVector, Path, Quiver, QuiverDatum, RationalMatrix,
    Relation, Representation, Weight,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub id: String,
    pub tail: String,
    pub head: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationTerm {
    pub coeff: Value,
    pub path: Vec<String>,
}

/// A quiver datum as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub quiver: QuiverSpec,
    /// Dimension per vertex id.
    pub dimension: BTreeMap<String, usize>,
    /// Weight per vertex id.
    pub weight: BTreeMap<String, i64>,
    /// Row-major matrix per arrow id, `beta(head)` rows of `beta(tail)` entries.
    pub representation: BTreeMap<String, Vec<Vec<Value>>>,
    /// Each relation is a list of `{coeff, path}` terms.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<Vec<RelationTerm>>,
}

fn input(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{field}: {msg}"))
}

/// Parses one matrix entry.
pub fn parse_entry(v: &Value, inexact: bool, field: &str) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| input(field, e)),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else if let Some(u) = n.as_u64() {
                Ok(BigRational::from_integer(BigInt::from(u)))
            } else if inexact {
                let f = n.as_f64().unwrap_or(f64::NAN);
                BigRational::from_float(f).ok_or_else(|| input(field, format!("{f} is not finite")))
            } else {
                Err(input(field, format!("{n} is a float; pass --inexact to accept floats")))
            }
        }
        other => Err(input(field, format!("expected a number or a rational string, got {other}"))),
    }
}

impl InstanceDocument {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("instance does not parse: {e}")))
    }

    /// Builds and validates the datum.
    pub fn to_datum(&self, inexact: bool) -> Result<QuiverDatum, CliError> {
        let q = Arc::new(
            Quiver::new(
                self.quiver.vertices.iter().cloned(),
                self.quiver.arrows.iter().map(|a| (a.id.clone(), a.tail.clone(), a.head.clone())),
            )
            .map_err(|e| input("quiver", e))?,
        );
        let dims = per_vertex(&q, &self.dimension, "dimension")?;
        let dim = DimensionVector::new(&q, dims).map_err(|e| input("dimension", e))?;
        let sigma = per_vertex(&q, &self.weight, "weight")?;
        let weight = Weight::new(&q, sigma).map_err(|e| input("weight", e))?;

        if let Some(extra) = self.representation.keys().find(|id| q.arrow(id).is_err()) {
            return Err(input(&format!("representation.{extra}"), "unknown arrow id"));
        }
        let mut maps = Vec::with_capacity(q.arrow_count());
        for a in q.arrows() {
            let field = format!("representation.{}", a.id);
            let rows = self.representation.get(&a.id).ok_or_else(|| input(&field, "missing matrix"))?;
            let (h, t) = (dim.get(a.head), dim.get(a.tail));
            if rows.len() != h {
                return Err(input(&field, format!("expected {h} rows, got {}", rows.len())));
            }
            let mut entries = Vec::with_capacity(h * t);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != t {
                    return Err(input(&format!("{field}[{i}]"), format!("expected {t} entries, got {}", row.len())));
                }
                for (j, v) in row.iter().enumerate() {
                    entries.push(parse_entry(v, inexact, &format!("{field}[{i}][{j}]"))?);
                }
            }
            maps.push(RationalMatrix::new(h, t, entries).map_err(|e| input(&field, e))?);
        }
        let rep = Representation::new(q.clone(), dim, maps).map_err(|e| input("representation", e))?;

        let mut relations = Vec::with_capacity(self.relations.len());
        for (k, terms) in self.relations.iter().enumerate() {
            let field = format!("relations[{k}]");
            let mut parsed = Vec::with_capacity(terms.len());
            for (t, term) in terms.iter().enumerate() {
                let coeff = parse_entry(&term.coeff, false, &format!("{field}[{t}].coeff"))?;
                let path = Path::from_ids(&q, &term.path).map_err(|e| input(&format!("{field}[{t}].path"), e))?;
                parsed.push((coeff, path));
            }
            relations.push(Relation::new(parsed).map_err(|e| input(&field, e))?);
        }

        let datum = QuiverDatum::new(rep, weight).map_err(|e| CliError::Input(e.to_string()))?;
        if relations.is_empty() {
            Ok(datum)
        } else {
            datum.with_relations(relations).map_err(|e| input("relations", e))
        }
    }

    /// Serializes a datum with exact rational-string entries.
    pub fn from_datum(d: &QuiverDatum) -> Self {
        let q = d.quiver();
        let ids = q.vertices().iter().cloned();
        InstanceDocument {
            quiver: QuiverSpec {
                vertices: q.vertices().to_vec(),
                arrows: q
                    .arrows()
                    .iter()
                    .map(|a| ArrowSpec {
                        id: a.id.clone(),
                        tail: q.vertices()[a.tail].clone(),
                        head: q.vertices()[a.head].clone(),
                    })
                    .collect(),
            },
            dimension: ids.clone().zip(d.dim().values().iter().copied()).collect(),
            weight: ids.zip(d.weight().values().iter().copied()).collect(),
            representation: q
                .arrows()
                .iter()
                .enumerate()
                .map(|(k, a)| (a.id.clone(), matrix_rows(d.representation().map(k))))
                .collect(),
            relations: d
                .relations()
                .iter()
                .map(|r| {
                    r.terms()
                        .iter()
                        .map(|(c, p)| RelationTerm {
                            coeff: Value::String(format_rational(c)),
                            path: p.ids(q).into_iter().map(String::from).collect(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

fn per_vertex<T: Copy>(q: &Quiver, values: &BTreeMap<String, T>, field: &str) -> Result<Vec<T>, CliError> {
    if let Some(extra) = values.keys().find(|id| q.vertex(id).is_err()) {
        return Err(input(&format!("{field}.{extra}"), "unknown vertex id"));
    }
    q.vertices()
        .iter()
        .map(|id| values.get(id).copied().ok_or_else(|| input(&format!("{field}.{id}"), "missing value")))
        .collect()
}

fn matrix_rows(m: &RationalMatrix) -> Vec<Vec<Value>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| Value::String(format_rational(m.get(i, j)))).collect())
        .collect()
}

/// Summary of the weight split: `n` positive and `m` negative vertices,
/// `M x M'` blocks, matrix size `N` and family size `|I_sigma|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSummary {
    pub n: usize,
    pub m: usize,
    pub block_rows: usize,
    pub block_cols: usize,
    pub size: usize,
    pub family_size: usize,
    pub positive: Vec<String>,
    pub sigma_plus: Vec<usize>,
    pub negative: Vec<String>,
    pub sigma_minus: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberDocument {
    pub i: usize,
    pub j: usize,
    pub path_index: usize,
    pub q: usize,
    pub r: usize,
    /// Arrow ids of the path, in traversal order.
    pub path: Vec<String>,
    pub row_offset: usize,
    pub col_offset: usize,
    pub block: Vec<Vec<String>>,
}

/// A block-matrix family with its layout, stored sparsely.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSummary>,
    pub size: usize,
    pub row_heights: Vec<usize>,
    pub col_widths: Vec<usize>,
    pub members: Vec<MemberDocument>,
}

impl FamilyDocument {
    pub fn from_family(family: &BlockMatrixFamily, datum: Option<&QuiverDatum>) -> Self {
        let split = datum.map(|d| {
            let s = split_weight(d).expect("datum was validated");
            let ids = |vs: &[usize]| vs.iter().map(|&v| d.quiver().vertices()[v].clone()).collect();
            SplitSummary {
                n: s.positive.len(),
                m: s.negative.len(),
                block_rows: s.block_rows,
                block_cols: s.block_cols,
                size: s.size,
                family_size: family.len(),
                positive: ids(&s.positive),
                sigma_plus: s.sigma_plus.clone(),
                negative: ids(&s.negative),
                sigma_minus: s.sigma_minus.clone(),
            }
        });
        let members = family
            .members()
            .iter()
            .zip(family.labels())
            .map(|(m, label)| MemberDocument {
                i: m.index.i,
                j: m.index.j,
                path_index: m.index.path,
                q: m.index.q,
                r: m.index.r,
                path: label.clone(),
                row_offset: m.row_offset,
                col_offset: m.col_offset,
                block: matrix_rows(&m.block)
                    .into_iter()
                    .map(|row| row.into_iter().map(|v| v.as_str().unwrap_or_default().to_string()).collect())
                    .collect(),
            })
            .collect();
        FamilyDocument {
            split,
            size: family.size(),
            row_heights: family.row_heights().to_vec(),
            col_widths: family.col_widths().to_vec(),
            members,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("family does not parse: {e}")))
    }

    pub fn to_family(&self) -> Result<BlockMatrixFamily, CliError> {
        let mut members = Vec::with_capacity(self.members.len());
        let mut labels = Vec::with_capacity(self.members.len());
        for (k, m) in self.members.iter().enumerate() {
            let field = format!("members[{k}].block");
            // The layout fixes the shape, which matters for blocks with no rows.
            let rows = *self.row_heights.get(m.q).ok_or_else(|| input(&field, "block row outside the layout"))?;
            let cols = *self.col_widths.get(m.r).ok_or_else(|| input(&field, "block column outside the layout"))?;
            if m.block.len() != rows {
                return Err(input(&field, format!("expected {rows} rows, got {}", m.block.len())));
            }
            let mut entries = Vec::with_capacity(rows * cols);
            for (i, row) in m.block.iter().enumerate() {
                if row.len() != cols {
                    return Err(input(&format!("{field}[{i}]"), format!("expected {cols} entries, got {}", row.len())));
                }
                for s in row {
                    entries.push(parse_rational(s).map_err(|e| input(&field, e))?);
                }
            }
            let block = RationalMatrix::new(rows, cols, entries).map_err(|e| input(&field, e))?;
            members.push(BlockMember {
                index: BlockIndex {
                    i: m.i,
                    j: m.j,
                    path: m.path_index,
                    q: m.q,
                    r: m.r,
                },
                row_offset: m.row_offset,
                col_offset: m.col_offset,
                block,
            });
            labels.push(m.path.clone());
        }
        BlockMatrixFamily::from_parts(self.size, self.row_heights.clone(), self.col_widths.clone(), members, labels)
            .map_err(|e| input("family", e))
    }
}
