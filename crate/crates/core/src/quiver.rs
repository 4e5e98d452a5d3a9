//! Acyclic quivers, dimension vectors, weights, paths and relations.

use std::collections::{HashMap, HashSet};

use num::rational::BigRational;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// Outcome of [`validate_quiver`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    /// Vertex indices in topological order (tail before head for every arrow).
    pub order: Vec<usize>,
    /// Whether the underlying undirected graph is connected. A disconnected
    /// quiver is accepted; callers may surface this as a warning.
    pub connected: bool,
}

/// A finite quiver without oriented cycles.
///
/// Vertices and arrows keep their declaration order; that order is what every
/// deterministic enumeration in the crate is keyed on.
#[derive(Clone, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
    order: Vec<usize>,
    connected: bool,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

impl Quiver {
    /// Builds a quiver from vertex ids and `(arrow id, tail id, head id)` triples.
    pub fn new<V, A, T, H>(vertices: impl IntoIterator<Item = V>, arrows: impl IntoIterator<Item = (A, T, H)>) -> Result<Self>
    where
        V: Into<String>,
        A: Into<String>,
        T: AsRef<str>,
        H: AsRef<str>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateId { kind: "vertex", id: v.clone() });
            }
        }
        let lookup = |id: &str| {
            vertex_index.get(id).copied().ok_or_else(|| Error::DanglingId {
                kind: "vertex",
                id: id.to_string(),
            })
        };
        let mut arrow_list = Vec::new();
        let mut arrow_index = HashMap::new();
        for (id, tail, head) in arrows {
            let id: String = id.into();
            let arrow = Arrow {
                tail: lookup(tail.as_ref())?,
                head: lookup(head.as_ref())?,
                id: id.clone(),
            };
            if arrow_index.insert(id.clone(), arrow_list.len()).is_some() {
                return Err(Error::DuplicateId { kind: "arrow", id });
            }
            arrow_list.push(arrow);
        }
        let Validation { order, connected } = validate_quiver(&vertices, &arrow_list)?;
        Ok(Self {
            vertices,
            arrows: arrow_list,
            vertex_index,
            arrow_index,
            order,
            connected,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index.get(id).copied().ok_or_else(|| Error::DanglingId {
            kind: "vertex",
            id: id.to_string(),
        })
    }

    pub fn arrow(&self, id: &str) -> Result<usize> {
        self.arrow_index.get(id).copied().ok_or_else(|| Error::DanglingId {
            kind: "arrow",
            id: id.to_string(),
        })
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Indices of arrows leaving `vertex`, in declaration order.
    pub fn outgoing(&self, vertex: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.tail == vertex)
            .map(|(i, _)| i)
    }

    /// Number of arrows `from -> to`.
    pub fn arrow_count_between(&self, from: usize, to: usize) -> usize {
        self.arrows.iter().filter(|a| a.tail == from && a.head == to).count()
    }

    /// Full subquiver on the given vertices (declaration order preserved).
    pub fn full_subquiver(&self, keep: &[usize]) -> Quiver {
        let keep: HashSet<usize> = keep.iter().copied().collect();
        let vertices = (0..self.vertex_count())
            .filter(|v| keep.contains(v))
            .map(|v| self.vertices[v].clone());
        let arrows = self
            .arrows
            .iter()
            .filter(|a| keep.contains(&a.tail) && keep.contains(&a.head))
            .map(|a| (a.id.clone(), self.vertices[a.tail].clone(), self.vertices[a.head].clone()));
        Quiver::new(vertices, arrows).expect("full subquiver of a valid quiver is valid")
    }
}

/// Topological order of a raw vertex/arrow list, or the first oriented cycle found.
///
/// Kahn's algorithm, always releasing the smallest ready vertex index, so the
/// order is deterministic.
pub fn validate_quiver(vertices: &[String], arrows: &[Arrow]) -> Result<Validation> {
    let n = vertices.len();
    for a in arrows {
        for end in [a.tail, a.head] {
            if end >= n {
                return Err(Error::DanglingId {
                    kind: "vertex",
                    id: format!("#{end}"),
                });
            }
        }
    }
    let mut indegree = vec![0usize; n];
    for a in arrows {
        indegree[a.head] += 1;
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for a in arrows.iter().filter(|a| a.tail == v) {
            indegree[a.head] -= 1;
            if indegree[a.head] == 0 {
                ready.insert(a.head);
            }
        }
    }
    if order.len() < n {
        return Err(Error::Cycle {
            cycle: find_cycle(n, arrows, &indegree).into_iter().map(|v| vertices[v].clone()).collect(),
        });
    }
    Ok(Validation {
        order,
        connected: is_connected(n, arrows),
    })
}

// Every vertex left with positive indegree after Kahn's pass has a predecessor
// that is also left over, so walking predecessors must revisit a vertex.
fn find_cycle(n: usize, arrows: &[Arrow], indegree: &[usize]) -> Vec<usize> {
    let start = (0..n).find(|&v| indegree[v] > 0).expect("a leftover vertex exists");
    let mut seen = vec![None; n];
    let mut walk = Vec::new();
    let mut v = start;
    loop {
        if let Some(pos) = seen[v] {
            let mut cycle: Vec<usize> = walk[pos..].to_vec();
            cycle.reverse();
            cycle.push(cycle[0]);
            return cycle;
        }
        seen[v] = Some(walk.len());
        walk.push(v);
        v = arrows
            .iter()
            .find(|a| a.head == v && indegree[a.tail] > 0)
            .map(|a| a.tail)
            .expect("leftover vertex has a leftover predecessor");
    }
}

fn is_connected(n: usize, arrows: &[Arrow]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for a in arrows {
            let next = if a.tail == v {
                a.head
            } else if a.head == v {
                a.tail
            } else {
                continue;
            };
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Non-negative integer per vertex, in the quiver's vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimensionVector(Vec<usize>);

impl DimensionVector {
    pub fn new(q: &Quiver, values: Vec<usize>) -> Result<Self> {
        if values.len() != q.vertex_count() {
            return Err(Error::Shape(format!(
                "dimension vector has {} entries for {} vertices",
                values.len(),
                q.vertex_count()
            )));
        }
        Ok(Self(values))
    }

    pub fn from_ids<'a>(q: &Quiver, values: impl IntoIterator<Item = (&'a str, usize)>) -> Result<Self> {
        Ok(Self(collect_total(q, values)?))
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, vertex: usize) -> usize {
        self.0[vertex]
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&v| self.0[v] != 0).collect()
    }

    pub fn as_integers(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64).collect()
    }
}

/// Integer per vertex, in the quiver's vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(q: &Quiver, values: Vec<i64>) -> Result<Self> {
        if values.len() != q.vertex_count() {
            return Err(Error::Shape(format!(
                "weight has {} entries for {} vertices",
                values.len(),
                q.vertex_count()
            )));
        }
        Ok(Self(values))
    }

    pub fn from_ids<'a>(q: &Quiver, values: impl IntoIterator<Item = (&'a str, i64)>) -> Result<Self> {
        Ok(Self(collect_total(q, values)?))
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, vertex: usize) -> i64 {
        self.0[vertex]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `sigma . beta`.
    pub fn pair(&self, beta: &DimensionVector) -> i64 {
        self.0.iter().zip(beta.values()).map(|(&s, &b)| s * b as i64).sum()
    }

    pub fn scaled(&self, n: i64) -> Weight {
        Weight(self.0.iter().map(|&x| x * n).collect())
    }
}

fn collect_total<'a, T: Copy>(q: &Quiver, values: impl IntoIterator<Item = (&'a str, T)>) -> Result<Vec<T>> {
    let mut out: Vec<Option<T>> = vec![None; q.vertex_count()];
    for (id, x) in values {
        let v = q.vertex(id)?;
        if out[v].replace(x).is_some() {
            return Err(Error::DuplicateId {
                kind: "vertex",
                id: id.to_string(),
            });
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(v, x)| {
            x.ok_or_else(|| Error::Shape(format!("vertex `{}` has no entry", q.vertices()[v])))
        })
        .collect()
}

/// Oriented path of length at least one, as arrow indices in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    arrows: Vec<usize>,
    source: usize,
    target: usize,
}

impl Path {
    pub fn new(q: &Quiver, arrows: Vec<usize>) -> Result<Self> {
        let (Some(&first), Some(&last)) = (arrows.first(), arrows.last()) else {
            return Err(Error::PathTooShort { min: 1 });
        };
        for &a in &arrows {
            if a >= q.arrow_count() {
                return Err(Error::DanglingId {
                    kind: "arrow",
                    id: format!("#{a}"),
                });
            }
        }
        for w in arrows.windows(2) {
            let (x, y) = (&q.arrows()[w[0]], &q.arrows()[w[1]]);
            if x.head != y.tail {
                return Err(Error::BrokenPath {
                    first: x.id.clone(),
                    second: y.id.clone(),
                });
            }
        }
        Ok(Self {
            source: q.arrows()[first].tail,
            target: q.arrows()[last].head,
            arrows,
        })
    }

    pub fn from_ids<S: AsRef<str>>(q: &Quiver, ids: &[S]) -> Result<Self> {
        let arrows = ids.iter().map(|id| q.arrow(id.as_ref())).collect::<Result<_>>()?;
        Self::new(q, arrows)
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn ids<'q>(&self, q: &'q Quiver) -> Vec<&'q str> {
        self.arrows.iter().map(|&a| q.arrows()[a].id.as_str()).collect()
    }
}

/// Every oriented path from `source` to `target`, ordered lexicographically by
/// the sequence of arrow positions (declaration order).
pub fn enumerate_paths(q: &Quiver, source: usize, target: usize) -> Vec<Path> {
    fn walk(q: &Quiver, at: usize, target: usize, prefix: &mut Vec<usize>, out: &mut Vec<Path>) {
        for a in q.outgoing(at) {
            prefix.push(a);
            let head = q.arrows()[a].head;
            if head == target {
                out.push(Path {
                    arrows: prefix.clone(),
                    source: q.arrows()[prefix[0]].tail,
                    target,
                });
            } else {
                walk(q, head, target, prefix, out);
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if source < q.vertex_count() && target < q.vertex_count() {
        walk(q, source, target, &mut Vec::new(), &mut out);
    }
    out
}

/// Linear combination of parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    terms: Vec<(BigRational, Path)>,
}

impl Relation {
    pub fn new(terms: Vec<(BigRational, Path)>) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidParameter("relation without terms".into()));
        };
        let ends = (first.source(), first.target());
        for (_, p) in &terms {
            if p.len() < 2 {
                return Err(Error::PathTooShort { min: 2 });
            }
            if (p.source(), p.target()) != ends {
                return Err(Error::NonParallelRelation);
            }
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(BigRational, Path)] {
        &self.terms
    }

    pub fn source(&self) -> usize {
        self.terms[0].1.source()
    }

    pub fn target(&self) -> usize {
        self.terms[0].1.target()
    }
}

/// Euler matrix of the path algebra: `E[x][y] = [x == y] - #{arrows x -> y}`.
pub fn euler_matrix(q: &Quiver) -> Vec<Vec<i64>> {
    let n = q.vertex_count();
    let mut e = vec![vec![0i64; n]; n];
    for (x, row) in e.iter_mut().enumerate() {
        row[x] = 1;
    }
    for a in q.arrows() {
        e[a.tail][a.head] -= 1;
    }
    e
}

/// Euler form of the path algebra `KQ`:
/// `sum_x alpha(x) beta(x) - sum_a alpha(ta) beta(ha)`.
///
/// Refuses bound quivers; the form of a quotient algebra is not computed here.
pub fn euler_form(q: &Quiver, alpha: &[i64], beta: &[i64], relations: &[Relation]) -> Result<i64> {
    if !relations.is_empty() {
        return Err(Error::BoundAlgebraUnsupported);
    }
    let n = q.vertex_count();
    if alpha.len() != n || beta.len() != n {
        return Err(Error::Shape(format!(
            "Euler form needs vectors of length {n}, got {} and {}",
            alpha.len(),
            beta.len()
        )));
    }
    let diagonal: i64 = alpha.iter().zip(beta).map(|(a, b)| a * b).sum();
    let arrows: i64 = q.arrows().iter().map(|a| alpha[a.tail] * beta[a.head]).sum();
    Ok(diagonal - arrows)
}
