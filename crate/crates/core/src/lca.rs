//! The local computation engine.
//!
//! A query asks whether one edge belongs to the matching `M_{2k−1}` built by
//! phases `ℓ = 1, 3, …, 2k−1`, where `M_ℓ = M_{ℓ−2} ⊕ Φ_ℓ` and `Φ_ℓ` is the
//! greedy maximal independent set of the length-ℓ conflict graph under the
//! phase's seeded order. Nothing is materialized globally: each procedure
//! recurses into the previous phase only for the edges and paths it touches.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use dashmap::DashMap;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};
use crate::ordering::{compare_ranked, OrderingError, Rank, Seed, SeedSet};
use crate::paths::{self, PathKey};

/// Default cap on augmenting-path checks per top-level query.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum LcaError {
    #[error("work budget of {budget} augmenting-path checks exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("phase {0} is not an odd value in the engine's range")]
    InvalidPhase(i64),
    #[error("path of length {found} queried at phase {expected}")]
    PathLength { expected: usize, found: usize },
    #[error("edge ({}, {}) is not in the graph", .0.lo(), .0.hi())]
    UnknownEdge(Edge),
    #[error("vertex {0} is out of range")]
    UnknownVertex(Vertex),
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("seeds cover {seeds} phases over {seed_n} vertices; engine needs {k} phases over {n}")]
    SeedMismatch {
        seeds: usize,
        seed_n: usize,
        k: usize,
        n: usize,
    },
    #[error(transparent)]
    Ordering(#[from] OrderingError),
}

/// Number of phases for a target approximation `ε`: `⌈1/ε⌉`.
pub fn phases_for_epsilon(eps: f64) -> Result<usize, LcaError> {
    if eps.is_nan() || eps <= 0.0 || !eps.is_finite() {
        return Err(LcaError::InvalidEpsilon(eps));
    }
    // Absorb representation error so that e.g. 1/0.2 stays 5.
    Ok(((1.0 / eps) - 1e-9).ceil().max(1.0) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MemoMode {
    /// Every procedure call is executed, as in the raw recursion.
    Off,
    /// Results are cached for the duration of one top-level query.
    #[default]
    PerQuery,
    /// Results are cached across queries in engine-wide concurrent maps.
    Shared,
}

/// Worklist discipline for the relevant-path closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exploration {
    #[default]
    Bfs,
    Dfs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub memo: MemoMode,
    /// `None` disables the cap.
    pub budget: Option<u64>,
    pub exploration: Exploration,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            memo: MemoMode::PerQuery,
            budget: Some(DEFAULT_BUDGET),
            exploration: Exploration::Bfs,
        }
    }
}

/// Per-query work counters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Stats {
    /// Augmenting-path checks executed per phase; index `i` is phase `2i+1`.
    pub augmenting_checks: Vec<u64>,
    /// Executed procedure invocations of every kind.
    pub calls: u64,
    /// `(phase, |V_C|)` for every relevant-path closure computed.
    pub relevant_sizes: Vec<(usize, usize)>,
    pub elapsed: Duration,
}

impl Stats {
    fn with_phases(k: usize) -> Self {
        Stats {
            augmenting_checks: vec![0; k],
            ..Default::default()
        }
    }

    /// Total augmenting-path checks over all phases.
    pub fn f(&self) -> u64 {
        self.augmenting_checks.iter().sum()
    }

    pub fn f_phase(&self, len: usize) -> u64 {
        self.augmenting_checks.get(len / 2).copied().unwrap_or(0)
    }

    pub fn max_relevant(&self) -> usize {
        self.relevant_sizes
            .iter()
            .map(|&(_, s)| s)
            .max()
            .unwrap_or(0)
    }

    pub fn mean_relevant(&self) -> f64 {
        if self.relevant_sizes.is_empty() {
            0.0
        } else {
            self.relevant_sizes
                .iter()
                .map(|&(_, s)| s as f64)
                .sum::<f64>()
                / self.relevant_sizes.len() as f64
        }
    }

    pub fn merge(&mut self, other: &Stats) {
        if self.augmenting_checks.len() < other.augmenting_checks.len() {
            self.augmenting_checks
                .resize(other.augmenting_checks.len(), 0);
        }
        for (a, b) in self
            .augmenting_checks
            .iter_mut()
            .zip(&other.augmenting_checks)
        {
            *a += b;
        }
        self.calls += other.calls;
        self.relevant_sizes.extend_from_slice(&other.relevant_sizes);
        self.elapsed += other.elapsed;
    }
}

/// A locally explored piece of a conflict graph. Nodes are sorted; edges are
/// index pairs `(i, j)` with `i < j`, sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConflictSubgraph {
    nodes: Vec<PathKey>,
    edges: Vec<(usize, usize)>,
}

impl ConflictSubgraph {
    /// Induced subgraph on `nodes`: two nodes are adjacent iff their paths
    /// share a vertex.
    pub fn induced(mut nodes: Vec<PathKey>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        let mut by_vertex: HashMap<Vertex, Vec<usize>> = HashMap::new();
        for (i, p) in nodes.iter().enumerate() {
            for &v in p.vertices() {
                by_vertex.entry(v).or_default().push(i);
            }
        }
        let mut edges = Vec::new();
        for members in by_vertex.values() {
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    edges.push((i.min(j), i.max(j)));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        ConflictSubgraph { nodes, edges }
    }

    pub fn nodes(&self) -> &[PathKey] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_pairs(&self) -> impl Iterator<Item = (&PathKey, &PathKey)> {
        self.edges
            .iter()
            .map(|&(i, j)| (&self.nodes[i], &self.nodes[j]))
    }

    pub fn contains(&self, p: &PathKey) -> bool {
        self.nodes.binary_search(p).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }
}

/// Greedy MIS under an explicit comparator: nodes in ascending order, each
/// kept iff no neighbor was kept before it. Returns the kept nodes, sorted.
pub fn greedy_mis_by<F>(c: &ConflictSubgraph, mut cmp: F) -> Vec<PathKey>
where
    F: FnMut(&PathKey, &PathKey) -> Ordering,
{
    let adj = c.adjacency();
    let mut order: Vec<usize> = (0..c.nodes.len()).collect();
    order.sort_by(|&a, &b| cmp(&c.nodes[a], &c.nodes[b]));
    let mut chosen = vec![false; c.nodes.len()];
    for i in order {
        if adj[i].iter().all(|&j| !chosen[j]) {
            chosen[i] = true;
        }
    }
    c.nodes
        .iter()
        .zip(chosen)
        .filter(|&(_, keep)| keep)
        .map(|(p, _)| p.clone())
        .collect()
}

/// Greedy MIS under the seeded order `(rank, key)`.
pub fn greedy_mis(c: &ConflictSubgraph, seed: &Seed) -> Vec<PathKey> {
    greedy_mis_by(c, |a, b| seed.compare(a, b))
}

#[derive(Debug, Default)]
struct SharedTables {
    matching: DashMap<(Edge, usize), bool>,
    augmenting: DashMap<(usize, PathKey), bool>,
    free: DashMap<(Vertex, usize), bool>,
    in_mis: DashMap<(usize, PathKey), bool>,
}

#[derive(Debug, Default)]
struct LocalTables {
    matching: HashMap<(Edge, usize), bool>,
    augmenting: HashMap<(usize, PathKey), bool>,
    free: HashMap<(Vertex, usize), bool>,
    in_mis: HashMap<(usize, PathKey), bool>,
}

enum Tables<'a> {
    Off,
    Local(Box<LocalTables>),
    Shared(&'a SharedTables),
}

macro_rules! table_access {
    ($get:ident, $put:ident, $field:ident, $key:ty) => {
        fn $get(&self, key: &$key) -> Option<bool> {
            match self {
                Tables::Off => None,
                Tables::Local(t) => t.$field.get(key).copied(),
                Tables::Shared(t) => t.$field.get(key).map(|r| *r),
            }
        }

        fn $put(&mut self, key: $key, value: bool) {
            match self {
                Tables::Off => {}
                Tables::Local(t) => {
                    t.$field.insert(key, value);
                }
                Tables::Shared(t) => {
                    t.$field.insert(key, value);
                }
            }
        }
    };
}

impl Tables<'_> {
    table_access!(get_matching, put_matching, matching, (Edge, usize));
    table_access!(get_augmenting, put_augmenting, augmenting, (usize, PathKey));
    table_access!(get_free, put_free, free, (Vertex, usize));
    table_access!(get_in_mis, put_in_mis, in_mis, (usize, PathKey));
}

/// Answer plus the work it took.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryOutcome {
    pub answer: bool,
    pub stats: Stats,
}

/// Local matching oracle over a fixed graph and seed set.
///
/// Answers depend only on `(graph, seeds, k)`; the memo mode and exploration
/// order change the work done, never the result.
pub struct Engine<'g> {
    graph: &'g Graph,
    seeds: SeedSet,
    k: usize,
    config: EngineConfig,
    shared: SharedTables,
    ranks: DashMap<(usize, PathKey), Rank>,
}

impl<'g> Engine<'g> {
    /// Engine for approximation `ε`, with `k = ⌈1/ε⌉` phases.
    pub fn new(
        graph: &'g Graph,
        eps: f64,
        seeds: SeedSet,
        config: EngineConfig,
    ) -> Result<Self, LcaError> {
        Self::with_phases(graph, phases_for_epsilon(eps)?, seeds, config)
    }

    pub fn with_phases(
        graph: &'g Graph,
        k: usize,
        seeds: SeedSet,
        config: EngineConfig,
    ) -> Result<Self, LcaError> {
        let n = seed_vertex_count(graph);
        if k == 0 || seeds.k() < k || seeds.vertex_count() != n {
            return Err(LcaError::SeedMismatch {
                seeds: seeds.k(),
                seed_n: seeds.vertex_count(),
                k,
                n,
            });
        }
        Ok(Engine {
            graph,
            seeds,
            k,
            config,
            shared: SharedTables::default(),
            ranks: DashMap::new(),
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn seeds(&self) -> &SeedSet {
        &self.seeds
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn config(&self) -> EngineConfig {
        self.config
    }

    /// Final phase `2k − 1`.
    pub fn last_phase(&self) -> usize {
        2 * self.k - 1
    }

    /// Whether `e` is in the final matching `M_{2k−1}`.
    pub fn query(&self, e: Edge) -> Result<bool, LcaError> {
        self.query_with_stats(e).map(|o| o.answer)
    }

    pub fn query_with_stats(&self, e: Edge) -> Result<QueryOutcome, LcaError> {
        let len = self.last_phase();
        self.run(|ctx| ctx.in_matching(e, len), |ctx| ctx.check_edge(e))
    }

    /// Whether `e ∈ M_ℓ`, for `ℓ ∈ {−1, 1, 3, …, 2k−1}`.
    pub fn is_in_matching(&self, e: Edge, phase: i64) -> Result<bool, LcaError> {
        if phase == -1 {
            self.check_edge(e)?;
            return Ok(false);
        }
        let len = self.check_phase(phase)?;
        self.answer(|ctx| ctx.in_matching(e, len), |ctx| ctx.check_edge(e))
    }

    /// Whether `p` is in the greedy MIS of the length-ℓ conflict graph.
    pub fn is_path_in_mis(&self, p: &PathKey, phase: i64) -> Result<bool, LcaError> {
        let len = self.check_path(p, phase)?;
        self.answer(|ctx| ctx.in_mis(p, len), |_| Ok(()))
    }

    pub fn relevant_paths(&self, p: &PathKey, phase: i64) -> Result<ConflictSubgraph, LcaError> {
        let len = self.check_path(p, phase)?;
        let mut ctx = self.context();
        ctx.relevant_paths(p, len)
    }

    /// Whether `p` is augmenting with respect to `M_{ℓ−2}`.
    pub fn is_augmenting_path(&self, p: &PathKey, phase: i64) -> Result<bool, LcaError> {
        let len = self.check_path(p, phase)?;
        self.answer(|ctx| ctx.augmenting(p, len), |_| Ok(()))
    }

    /// Whether `v` is unmatched in `M_{ℓ−2}`.
    pub fn is_free(&self, v: Vertex, phase: i64) -> Result<bool, LcaError> {
        if v as usize >= self.graph.vertex_count() {
            return Err(LcaError::UnknownVertex(v));
        }
        let len = self.check_phase(phase)?;
        self.answer(|ctx| ctx.free(v, len), |_| Ok(()))
    }

    /// Matching edges of `M_{2k−1}`, querying every edge.
    pub fn materialize(&self) -> Result<Vec<Edge>, LcaError> {
        self.materialize_with_stats().map(|(m, _)| m)
    }

    /// Queries run in parallel; results are gathered in edge order.
    pub fn materialize_with_stats(&self) -> Result<(Vec<Edge>, Vec<Stats>), LcaError> {
        let outcomes: Vec<(Edge, QueryOutcome)> = self
            .graph
            .edges()
            .par_iter()
            .map(|&e| self.query_with_stats(e).map(|o| (e, o)))
            .collect::<Result<_, _>>()?;
        let matching = outcomes
            .iter()
            .filter(|(_, o)| o.answer)
            .map(|(e, _)| *e)
            .collect();
        Ok((
            matching,
            outcomes.into_iter().map(|(_, o)| o.stats).collect(),
        ))
    }

    /// Rank of `p` under the seed of its phase, cached engine-wide.
    pub fn rank(&self, p: &PathKey) -> Result<Rank, LcaError> {
        let len = p.len();
        self.check_phase(len as i64)?;
        Ok(self.rank_unchecked(p))
    }

    fn rank_unchecked(&self, p: &PathKey) -> Rank {
        let key = (p.len(), p.clone());
        if let Some(r) = self.ranks.get(&key) {
            return r.clone();
        }
        let seed = self
            .seeds
            .for_phase(p.len())
            .expect("phase validated at the API boundary");
        let r = seed.rank(p);
        self.ranks.insert(key, r.clone());
        r
    }

    fn context(&self) -> Ctx<'_, 'g> {
        let tables = match self.config.memo {
            MemoMode::Off => Tables::Off,
            MemoMode::PerQuery => Tables::Local(Box::default()),
            MemoMode::Shared => Tables::Shared(&self.shared),
        };
        Ctx {
            engine: self,
            tables,
            stats: Stats::with_phases(self.k),
            checks: 0,
        }
    }

    fn run<F, V>(&self, body: F, validate: V) -> Result<QueryOutcome, LcaError>
    where
        F: FnOnce(&mut Ctx<'_, 'g>) -> Result<bool, LcaError>,
        V: FnOnce(&Ctx<'_, 'g>) -> Result<(), LcaError>,
    {
        let start = Instant::now();
        let mut ctx = self.context();
        validate(&ctx)?;
        let answer = body(&mut ctx)?;
        ctx.stats.elapsed = start.elapsed();
        Ok(QueryOutcome {
            answer,
            stats: ctx.stats,
        })
    }

    fn answer<F, V>(&self, body: F, validate: V) -> Result<bool, LcaError>
    where
        F: FnOnce(&mut Ctx<'_, 'g>) -> Result<bool, LcaError>,
        V: FnOnce(&Ctx<'_, 'g>) -> Result<(), LcaError>,
    {
        self.run(body, validate).map(|o| o.answer)
    }

    fn check_edge(&self, e: Edge) -> Result<(), LcaError> {
        if self.graph.contains(e) {
            Ok(())
        } else {
            Err(LcaError::UnknownEdge(e))
        }
    }

    fn check_phase(&self, phase: i64) -> Result<usize, LcaError> {
        if phase >= 1 && phase % 2 == 1 && phase as usize <= self.last_phase() {
            Ok(phase as usize)
        } else {
            Err(LcaError::InvalidPhase(phase))
        }
    }

    fn check_path(&self, p: &PathKey, phase: i64) -> Result<usize, LcaError> {
        let len = self.check_phase(phase)?;
        if p.len() != len {
            return Err(LcaError::PathLength {
                expected: len,
                found: p.len(),
            });
        }
        for e in p.edges() {
            self.check_edge(e)?;
        }
        Ok(len)
    }
}

fn seed_vertex_count(g: &Graph) -> usize {
    g.vertex_count().max(2)
}

struct Ctx<'a, 'g> {
    engine: &'a Engine<'g>,
    tables: Tables<'a>,
    stats: Stats,
    checks: u64,
}

impl Ctx<'_, '_> {
    fn check_edge(&self, e: Edge) -> Result<(), LcaError> {
        self.engine.check_edge(e)
    }

    /// `e ∈ M_ℓ`; phases below 1 denote the empty matching.
    fn in_matching(&mut self, e: Edge, len: usize) -> Result<bool, LcaError> {
        if len == 0 {
            return Ok(false);
        }
        if let Some(b) = self.tables.get_matching(&(e, len)) {
            return Ok(b);
        }
        self.stats.calls += 1;
        let before = self.in_matching_prev(e, len)?;
        let mut through = Vec::new();
        paths::extend_through_edge(self.engine.graph, e, len, &mut through);
        through.sort_unstable();
        // Paths in the MIS are vertex-disjoint, so at most one contains e.
        let mut augmented = false;
        for p in &through {
            if self.in_mis(p, len)? {
                augmented = true;
                break;
            }
        }
        let b = before ^ augmented;
        self.tables.put_matching((e, len), b);
        Ok(b)
    }

    fn in_matching_prev(&mut self, e: Edge, len: usize) -> Result<bool, LcaError> {
        if len <= 1 {
            Ok(false)
        } else {
            self.in_matching(e, len - 2)
        }
    }

    fn in_mis(&mut self, p: &PathKey, len: usize) -> Result<bool, LcaError> {
        let key = (len, p.clone());
        if let Some(b) = self.tables.get_in_mis(&key) {
            return Ok(b);
        }
        self.stats.calls += 1;
        let closure = self.relevant_paths(p, len)?;
        let b = if closure.is_empty() {
            false
        } else {
            let nodes = closure.nodes();
            let ranks: Vec<Rank> = nodes
                .iter()
                .map(|q| self.engine.rank_unchecked(q))
                .collect();
            let at = |q: &PathKey| nodes.binary_search(q).expect("node of the closure");
            let mis = greedy_mis_by(&closure, |a, b| {
                compare_ranked(&ranks[at(a)], a, &ranks[at(b)], b)
            });
            mis.binary_search(p).is_ok()
        };
        self.tables.put_in_mis(key, b);
        Ok(b)
    }

    /// Closure of `{p}` under "augmenting, intersects a member, and ranks
    /// below it", with every intersection edge among the members.
    fn relevant_paths(&mut self, p: &PathKey, len: usize) -> Result<ConflictSubgraph, LcaError> {
        self.stats.calls += 1;
        if !self.augmenting(p, len)? {
            return Ok(ConflictSubgraph::default());
        }
        let graph = self.engine.graph;
        let mut members: HashSet<PathKey> = HashSet::new();
        members.insert(p.clone());
        let mut frontier: VecDeque<PathKey> = VecDeque::new();
        frontier.push_back(p.clone());
        let exploration = self.engine.config.exploration;
        while let Some(q) = match exploration {
            Exploration::Bfs => frontier.pop_front(),
            Exploration::Dfs => frontier.pop_back(),
        } {
            let q_rank = self.engine.rank_unchecked(&q);
            for cand in paths::intersecting_paths(graph, &q) {
                if members.contains(&cand) || !self.augmenting(&cand, len)? {
                    continue;
                }
                let c_rank = self.engine.rank_unchecked(&cand);
                if compare_ranked(&c_rank, &cand, &q_rank, &q) == Ordering::Less {
                    members.insert(cand.clone());
                    frontier.push_back(cand);
                }
            }
        }
        self.stats.relevant_sizes.push((len, members.len()));
        Ok(ConflictSubgraph::induced(members.into_iter().collect()))
    }

    /// Odd-numbered edges outside `M_{ℓ−2}`, even-numbered edges inside, and
    /// both endpoints free.
    fn augmenting(&mut self, p: &PathKey, len: usize) -> Result<bool, LcaError> {
        let key = (len, p.clone());
        if let Some(b) = self.tables.get_augmenting(&key) {
            return Ok(b);
        }
        self.stats.calls += 1;
        self.stats.augmenting_checks[len / 2] += 1;
        self.checks += 1;
        if let Some(budget) = self.engine.config.budget {
            if self.checks > budget {
                return Err(LcaError::BudgetExhausted { budget });
            }
        }
        let b = if len == 1 {
            true
        } else {
            self.alternates(p, len)? && {
                let (a, z) = p.endpoints();
                self.free(a, len)? && self.free(z, len)?
            }
        };
        self.tables.put_augmenting(key, b);
        Ok(b)
    }

    fn alternates(&mut self, p: &PathKey, len: usize) -> Result<bool, LcaError> {
        for (i, e) in p.edges().enumerate() {
            let should_match = i % 2 == 1;
            if self.in_matching_prev(e, len)? != should_match {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn free(&mut self, v: Vertex, len: usize) -> Result<bool, LcaError> {
        if len <= 1 {
            return Ok(true);
        }
        if let Some(b) = self.tables.get_free(&(v, len)) {
            return Ok(b);
        }
        self.stats.calls += 1;
        let graph = self.engine.graph;
        let mut b = true;
        for &u in graph.adj(v) {
            if self.in_matching_prev(Edge::new(u, v), len)? {
                b = false;
                break;
            }
        }
        self.tables.put_free((v, len), b);
        Ok(b)
    }
}
