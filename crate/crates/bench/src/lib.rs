//! Fixtures shared by the criterion benches.

use lcamatch_core::{Edge, Graph, SeedSet};

/// A random bounded-degree graph with seeds for `k` phases.
pub fn fixture(n: usize, d: usize, k: usize, seed: u64) -> (Graph, SeedSet) {
    let g = Graph::random_bounded(n, d, seed);
    let seeds = SeedSet::init(k, n.max(2), seed ^ 0x5eed).expect("valid parameters");
    (g, seeds)
}

/// Every `stride`-th edge, for a fixed query mix.
pub fn query_edges(g: &Graph, count: usize) -> Vec<Edge> {
    let stride = (g.edge_count() / count.max(1)).max(1);
    g.edges()
        .iter()
        .step_by(stride)
        .take(count)
        .copied()
        .collect()
}
