//! Simple paths of odd length and their canonical identities.
//!
//! A [`PathKey`] is the node identity used by conflict graphs: a simple path
//! stored in the orientation whose first vertex is smaller than its last.

use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};

/// Inline capacity covers paths of up to seven edges (four phases).
pub type VertexSeq = SmallVec<[Vertex; 8]>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("path must have at least two vertices")]
    TooShort,
    #[error("path length {0} is even; only odd lengths are supported")]
    EvenLength(usize),
    #[error("vertex {0} appears twice")]
    RepeatedVertex(Vertex),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(Vertex, Vertex),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathKey(VertexSeq);

impl PathKey {
    /// Validates `seq` against `g` and normalizes its orientation.
    pub fn canonical(g: &Graph, seq: &[Vertex]) -> Result<Self, PathError> {
        if seq.len() < 2 {
            return Err(PathError::TooShort);
        }
        let len = seq.len() - 1;
        if len.is_multiple_of(2) {
            return Err(PathError::EvenLength(len));
        }
        for (i, &v) in seq.iter().enumerate() {
            if seq[..i].contains(&v) {
                return Err(PathError::RepeatedVertex(v));
            }
        }
        for w in seq.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(PathError::NotAdjacent(w[0], w[1]));
            }
        }
        Ok(Self::normalize(seq))
    }

    /// Orientation normalization for a sequence already known to be a simple path.
    pub(crate) fn normalize(seq: &[Vertex]) -> Self {
        // Distinct endpoints decide the lexicographic comparison with the reversal.
        if seq[0] < seq[seq.len() - 1] {
            PathKey(SmallVec::from_slice(seq))
        } else {
            PathKey(seq.iter().rev().copied().collect())
        }
    }

    pub fn from_edge(e: Edge) -> Self {
        PathKey(SmallVec::from_slice(&[e.lo(), e.hi()]))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Edges `e_1 .. e_len` in path order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.0.windows(2).map(|w| Edge::new(w[0], w[1]))
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.0[0], self.0[self.0.len() - 1])
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges().any(|x| x == e)
    }

    pub fn intersects(&self, other: &PathKey) -> bool {
        self.0.iter().any(|v| other.0.contains(v))
    }
}

impl fmt::Debug for PathKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for PathKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

fn check_len(len: usize) -> Result<(), PathError> {
    if len == 0 {
        Err(PathError::TooShort)
    } else if len.is_multiple_of(2) {
        Err(PathError::EvenLength(len))
    } else {
        Ok(())
    }
}

/// All simple paths with exactly `len` edges that use `e`, sorted.
pub fn paths_through_edge(g: &Graph, e: Edge, len: usize) -> Result<Vec<PathKey>, PathError> {
    check_len(len)?;
    let mut out = Vec::new();
    if g.contains(e) {
        extend_through_edge(g, e, len, &mut out);
    }
    out.sort_unstable();
    Ok(out)
}

/// All simple paths with exactly `len` edges that visit `v`, sorted.
pub fn paths_through_vertex(g: &Graph, v: Vertex, len: usize) -> Result<Vec<PathKey>, PathError> {
    check_len(len)?;
    let mut out = Vec::new();
    if (v as usize) < g.vertex_count() {
        collect_through_vertex(g, v, len, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Every path of the same length as `p` sharing at least one vertex with it,
/// excluding `p` itself, sorted.
pub fn intersecting_paths(g: &Graph, p: &PathKey) -> Vec<PathKey> {
    let mut out = Vec::new();
    for &v in p.vertices() {
        collect_through_vertex(g, v, p.len(), &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out.retain(|q| q != p);
    out
}

/// Upper bound on paths of length `len` through one edge: `len·(d−1)^(len−1)`.
pub fn edge_path_bound(d: usize, len: usize) -> u128 {
    len as u128 * (d.saturating_sub(1) as u128).pow(len as u32 - 1)
}

/// Upper bound on the degree of a length-`len` conflict graph:
/// `d·(len+1)·len·(d−1)^(len−1)`.
pub fn conflict_degree_bound(d: usize, len: usize) -> u128 {
    d as u128 * (len as u128 + 1) * edge_path_bound(d, len)
}

pub(crate) fn collect_through_vertex(g: &Graph, v: Vertex, len: usize, out: &mut Vec<PathKey>) {
    for &u in g.adj(v) {
        extend_through_edge(g, Edge::new(u, v), len, out);
    }
}

/// Appends each path through `e` exactly once: with `e` oriented `lo → hi`, a
/// path is fixed by how many edges precede `e`, and both sides grow by
/// depth-first extension that never revisits a vertex.
pub(crate) fn extend_through_edge(g: &Graph, e: Edge, len: usize, out: &mut Vec<PathKey>) {
    let (a, b) = (e.lo(), e.hi());
    for left in 0..len {
        let right = len - 1 - left;
        let mut left_chain: VertexSeq = SmallVec::from_slice(&[a]);
        grow(g, &mut left_chain, left, &[b], &mut |lc: &[Vertex]| {
            let mut right_chain: VertexSeq = SmallVec::from_slice(&[b]);
            grow(g, &mut right_chain, right, lc, &mut |rc: &[Vertex]| {
                let mut seq: VertexSeq = lc.iter().rev().copied().collect();
                seq.extend_from_slice(rc);
                out.push(PathKey::normalize(&seq));
            });
        });
    }
}

fn grow(
    g: &Graph,
    chain: &mut VertexSeq,
    remaining: usize,
    forbidden: &[Vertex],
    visit: &mut dyn FnMut(&[Vertex]),
) {
    if remaining == 0 {
        visit(chain);
        return;
    }
    let tip = chain[chain.len() - 1];
    for &w in g.adj(tip) {
        if chain.contains(&w) || forbidden.contains(&w) {
            continue;
        }
        chain.push(w);
        grow(g, chain, remaining - 1, forbidden, visit);
        chain.pop();
    }
}
