//! Graph generators and brute-force references shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use lcamatch_core::graph::named;
use lcamatch_core::{Edge, Graph, PathKey, SeedSet, Vertex};

/// Small random graph with `n ∈ 8..=14`, `d ≤ 4` and at most 24 edges.
pub fn small_graph(i: u64) -> Graph {
    let n = 8 + (i % 7) as usize;
    let d = 2 + (i % 3) as usize;
    Graph::random_bounded_capped(n, d, 24, 1000 + i)
}

/// Named families plus random graphs, all with at most 30 vertices.
pub fn corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=12 {
        out.push((format!("path{n}"), named::path(n)));
    }
    for n in 3..=12 {
        out.push((format!("cycle{n}"), named::cycle(n)));
    }
    for n in 2..=6 {
        out.push((format!("complete{n}"), named::complete(n)));
    }
    out.push(("petersen".into(), named::petersen()));
    out.push(("empty5".into(), named::empty(5)));
    for i in 0..80u64 {
        let n = 5 + (i % 26) as usize;
        let d = 2 + (i % 3) as usize;
        out.push((
            format!("random{i}_n{n}_d{d}"),
            Graph::random_bounded(n, d, 77 + i),
        ));
    }
    out
}

pub fn seeds(k: usize, g: &Graph, seed: u64) -> SeedSet {
    SeedSet::init(k, g.vertex_count().max(2), seed).unwrap()
}

/// Every simple path with `len` edges, found by trying all vertex sequences
/// one position at a time without using the library's enumeration.
pub fn brute_paths(g: &Graph, len: usize) -> BTreeSet<PathKey> {
    fn go(g: &Graph, seq: &mut Vec<Vertex>, len: usize, out: &mut BTreeSet<PathKey>) {
        if seq.len() == len + 1 {
            out.insert(PathKey::canonical(g, seq).unwrap());
            return;
        }
        let n = g.vertex_count() as Vertex;
        for v in 0..n {
            let last = *seq.last().unwrap();
            if !seq.contains(&v) && g.has_edge(last, v) {
                seq.push(v);
                go(g, seq, len, out);
                seq.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for v in 0..g.vertex_count() as Vertex {
        go(g, &mut vec![v], len, &mut out);
    }
    out
}

/// Whether `p` alternates with respect to `m` and has both endpoints free.
pub fn augmenting_wrt(m: &[Edge], p: &PathKey) -> bool {
    let set: HashSet<Edge> = m.iter().copied().collect();
    let alternates = p
        .edges()
        .enumerate()
        .all(|(i, e)| set.contains(&e) == (i % 2 == 1));
    let free = |v: Vertex| !m.iter().any(|e| e.touches(v));
    let (a, z) = p.endpoints();
    alternates && free(a) && free(z)
}
