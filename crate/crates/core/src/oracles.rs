//! Ground-truth references: global algorithms the local engine must agree
//! with, and exhaustive searches that certify its guarantees.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};
use crate::lca::ConflictSubgraph;
use crate::ordering::{OrderingError, Seed, SeedSet};
use crate::paths::{self, PathKey, VertexSeq};

/// Edge limit for the exhaustive maximum matching.
pub const MAX_BRUTEFORCE_EDGES: usize = 24;
/// Vertex limit for full conflict-graph construction.
pub const MAX_CONFLICT_VERTICES: usize = 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large: {actual} {what} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("edges ({}, {}) and ({}, {}) share a vertex", .0.lo(), .0.hi(), .1.lo(), .1.hi())]
    NotAMatching(Edge, Edge),
    #[error("edge ({}, {}) is not in the graph", .0.lo(), .0.hi())]
    UnknownEdge(Edge),
    #[error("phase length must be odd and positive, got {0}")]
    BadLength(usize),
    #[error(transparent)]
    Ordering(#[from] OrderingError),
}

/// Maximum-cardinality matching by branch and bound over edge subsets.
pub fn max_matching_bruteforce(g: &Graph) -> Result<(usize, Vec<Edge>), OracleError> {
    if g.edge_count() > MAX_BRUTEFORCE_EDGES {
        return Err(OracleError::TooLarge {
            what: "edges",
            limit: MAX_BRUTEFORCE_EDGES,
            actual: g.edge_count(),
        });
    }
    struct Search<'a> {
        edges: &'a [Edge],
        used: Vec<bool>,
        current: Vec<Edge>,
        best: Vec<Edge>,
        cap: usize,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            if i == self.edges.len()
                || self.best.len() == self.cap
                || self.current.len() + (self.edges.len() - i) <= self.best.len()
            {
                return;
            }
            let e = self.edges[i];
            let (u, v) = (e.lo() as usize, e.hi() as usize);
            if !self.used[u] && !self.used[v] {
                self.used[u] = true;
                self.used[v] = true;
                self.current.push(e);
                self.go(i + 1);
                self.current.pop();
                self.used[u] = false;
                self.used[v] = false;
            }
            self.go(i + 1);
        }
    }
    let covered = (0..g.vertex_count() as Vertex)
        .filter(|&v| g.degree(v) > 0)
        .count();
    let mut s = Search {
        edges: g.edges(),
        used: vec![false; g.vertex_count()],
        current: Vec::new(),
        best: Vec::new(),
        cap: covered / 2,
    };
    s.go(0);
    Ok((s.best.len(), s.best))
}

/// `true` iff the edges are pairwise vertex-disjoint.
pub fn verify_matching(g: &Graph, edges: &[Edge]) -> Result<bool, OracleError> {
    if let Some(&e) = edges.iter().find(|&&e| !g.contains(e)) {
        return Err(OracleError::UnknownEdge(e));
    }
    Ok(mates(g, edges).is_ok())
}

/// Partner of every vertex under `m`, or the first conflicting pair.
fn mates(g: &Graph, m: &[Edge]) -> Result<Vec<Option<Vertex>>, OracleError> {
    let mut mate: Vec<Option<Vertex>> = vec![None; g.vertex_count()];
    let mut owner: Vec<Option<Edge>> = vec![None; g.vertex_count()];
    for &e in m {
        for (x, y) in [(e.lo(), e.hi()), (e.hi(), e.lo())] {
            if let Some(prev) = owner[x as usize] {
                return Err(OracleError::NotAMatching(prev, e));
            }
            owner[x as usize] = Some(e);
            mate[x as usize] = Some(y);
        }
    }
    Ok(mate)
}

fn checked_mates(g: &Graph, m: &[Edge]) -> Result<Vec<Option<Vertex>>, OracleError> {
    if let Some(&e) = m.iter().find(|&&e| !g.contains(e)) {
        return Err(OracleError::UnknownEdge(e));
    }
    mates(g, m)
}

/// A shortest augmenting path of length at most `max_len`, if any.
///
/// Iterative deepening over odd lengths; each round is an exhaustive DFS from
/// every free vertex over simple alternating paths.
pub fn find_augmenting_path(
    g: &Graph,
    m: &[Edge],
    max_len: usize,
) -> Result<Option<PathKey>, OracleError> {
    let mate = checked_mates(g, m)?;
    let mut len = 1;
    while len <= max_len {
        if let Some(p) = augmenting_path_of_length(g, &mate, len) {
            return Ok(Some(p));
        }
        len += 2;
    }
    Ok(None)
}

/// Length of the shortest augmenting path, searched up to `max_len`.
pub fn shortest_augmenting_path_len(
    g: &Graph,
    m: &[Edge],
    max_len: usize,
) -> Result<Option<usize>, OracleError> {
    Ok(find_augmenting_path(g, m, max_len)?.map(|p| p.len()))
}

fn augmenting_path_of_length(g: &Graph, mate: &[Option<Vertex>], len: usize) -> Option<PathKey> {
    fn dfs(g: &Graph, mate: &[Option<Vertex>], path: &mut VertexSeq, len: usize) -> bool {
        // Invariant: path has an even number of edges and ends at a vertex
        // whose next edge must be unmatched.
        let tip = path[path.len() - 1];
        for &w in g.adj(tip) {
            if path.contains(&w) || mate[tip as usize] == Some(w) {
                continue;
            }
            let edges_so_far = path.len();
            if edges_so_far == len {
                if mate[w as usize].is_none() {
                    path.push(w);
                    return true;
                }
                continue;
            }
            let Some(x) = mate[w as usize] else { continue };
            if path.contains(&x) {
                continue;
            }
            path.push(w);
            path.push(x);
            if dfs(g, mate, path, len) {
                return true;
            }
            path.pop();
            path.pop();
        }
        false
    }
    for s in 0..g.vertex_count() as Vertex {
        if mate[s as usize].is_some() {
            continue;
        }
        let mut path: VertexSeq = VertexSeq::from_slice(&[s]);
        if dfs(g, mate, &mut path, len) {
            return Some(PathKey::normalize(&path));
        }
    }
    None
}

/// Direct check against a matching: odd-numbered edges unmatched, even-numbered
/// edges matched, both endpoints free.
pub fn is_augmenting_wrt(p: &PathKey, matched: &HashSet<Edge>, g: &Graph) -> bool {
    let alternates = p
        .edges()
        .enumerate()
        .all(|(i, e)| matched.contains(&e) == (i % 2 == 1));
    let free = |v: Vertex| {
        g.adj(v)
            .iter()
            .all(|&u| !matched.contains(&Edge::new(u, v)))
    };
    let (a, z) = p.endpoints();
    alternates && free(a) && free(z)
}

/// The full conflict graph: every augmenting path of length `len` with
/// respect to `m`, adjacent when they share a vertex.
pub fn build_conflict_graph(
    g: &Graph,
    m: &[Edge],
    len: usize,
) -> Result<ConflictSubgraph, OracleError> {
    guard_vertices(g)?;
    if len.is_multiple_of(2) {
        return Err(OracleError::BadLength(len));
    }
    checked_mates(g, m)?;
    let matched: HashSet<Edge> = m.iter().copied().collect();
    let mut nodes = Vec::new();
    for &e in g.edges() {
        paths::extend_through_edge(g, e, len, &mut nodes);
    }
    nodes.sort_unstable();
    nodes.dedup();
    nodes.retain(|p| is_augmenting_wrt(p, &matched, g));
    Ok(ConflictSubgraph::induced(nodes))
}

/// Global greedy MIS of a conflict graph: paths in seeded order, each kept
/// iff none of its vertices is already covered by a kept path.
pub fn global_greedy_mis(c: &ConflictSubgraph, seed: &Seed) -> Vec<PathKey> {
    let mut ranked: Vec<_> = c.nodes().iter().map(|p| (seed.rank(p), p)).collect();
    ranked.sort();
    let mut covered: HashSet<Vertex> = HashSet::new();
    let mut kept = Vec::new();
    for (_, p) in ranked {
        if p.vertices().iter().all(|v| !covered.contains(v)) {
            covered.extend(p.vertices().iter().copied());
            kept.push(p.clone());
        }
    }
    kept.sort();
    kept
}

/// `M ⊕ Φ`, sorted.
pub fn augment(m: &[Edge], phi: &[PathKey]) -> Vec<Edge> {
    let mut set: HashSet<Edge> = m.iter().copied().collect();
    for p in phi {
        for e in p.edges() {
            if !set.remove(&e) {
                set.insert(e);
            }
        }
    }
    let mut out: Vec<Edge> = set.into_iter().collect();
    out.sort();
    out
}

/// Matchings `M_1, M_3, …, M_{2k−1}` of the phase algorithm, run globally.
pub fn abstract_distributed_phases(
    g: &Graph,
    k: usize,
    seeds: &SeedSet,
) -> Result<Vec<Vec<Edge>>, OracleError> {
    guard_vertices(g)?;
    let mut m: Vec<Edge> = Vec::new();
    let mut phases = Vec::with_capacity(k);
    for i in 0..k {
        let len = 2 * i + 1;
        let conflict = build_conflict_graph(g, &m, len)?;
        let phi = global_greedy_mis(&conflict, seeds.for_phase(len)?);
        m = augment(&m, &phi);
        phases.push(m.clone());
    }
    Ok(phases)
}

/// Final matching `M_{2k−1}` of the phase algorithm, run globally.
pub fn abstract_distributed_mm(
    g: &Graph,
    k: usize,
    seeds: &SeedSet,
) -> Result<Vec<Edge>, OracleError> {
    Ok(abstract_distributed_phases(g, k, seeds)?
        .pop()
        .unwrap_or_default())
}

fn guard_vertices(g: &Graph) -> Result<(), OracleError> {
    if g.vertex_count() > MAX_CONFLICT_VERTICES {
        return Err(OracleError::TooLarge {
            what: "vertices",
            limit: MAX_CONFLICT_VERTICES,
            actual: g.vertex_count(),
        });
    }
    Ok(())
}
