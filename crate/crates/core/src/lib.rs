//! Local computation of approximate maximum matchings on bounded-degree
//! graphs.
//!
//! [`lca::Engine`] answers "is edge `e` in the matching?" by simulating
//! `k = ⌈1/ε⌉` phases of augmenting-path packing, one recursive query at a
//! time. Every answer is consistent with a single global matching that has no
//! augmenting path of length at most `2k − 1`, hence size at least
//! `(1 − 1/k)·|M*|`. [`oracles`] holds the global reference implementations
//! used to certify that.

pub mod graph;
pub mod lca;
pub mod oracles;
pub mod ordering;
pub mod paths;
pub mod querytree;

pub use graph::{Edge, Graph, GraphError, Vertex};
pub use lca::{
    ConflictSubgraph, Engine, EngineConfig, Exploration, LcaError, MemoMode, QueryOutcome, Stats,
};
pub use ordering::{OrderingError, OrderingMode, Rank, Seed, SeedConfig, SeedSet};
pub use paths::{PathError, PathKey};
