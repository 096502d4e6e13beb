//! Immutable bounded-degree undirected graphs.
//!
//! Vertices are dense ids `0..n`. Edges are kept canonically as `(min, max)`
//! and every adjacency list is sorted, so iteration order is a pure function
//! of the edge set.

use std::fmt;
use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type Vertex = u32;

/// An undirected edge stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(Vertex, Vertex);

impl Edge {
    /// Builds the canonical edge between `a` and `b`. `a == b` is accepted
    /// here; graphs reject self-loops at construction.
    pub fn new(a: Vertex, b: Vertex) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn lo(self) -> Vertex {
        self.0
    }

    pub fn hi(self) -> Vertex {
        self.1
    }

    pub fn touches(self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn shares_vertex(self, other: Edge) -> bool {
        self.touches(other.0) || self.touches(other.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.0, self.1)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: Vertex, v: Vertex },
    #[error("line {line}: self-loop on vertex {v}")]
    SelfLoop { line: usize, v: Vertex },
    #[error("line {line}: vertex {v} exceeds declared degree bound {bound}")]
    DegreeExceeded {
        line: usize,
        v: Vertex,
        bound: usize,
    },
    #[error("vertex {v} out of range for graph with {n} vertices")]
    VertexOutOfRange { v: Vertex, n: usize },
    #[error("edge ({u}, {v}) is not in the graph")]
    UnknownEdge { u: Vertex, v: Vertex },
    #[error("io error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    edges: Vec<Edge>,
    degree_bound: usize,
}

impl Graph {
    /// Builds a graph from an edge list, checking every invariant.
    ///
    /// `degree_bound` of `None` takes the observed maximum degree (at least 1).
    pub fn from_edges(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
        degree_bound: Option<usize>,
    ) -> Result<Self, GraphError> {
        let mut builder = Builder::new(vertex_count, degree_bound);
        for (i, (u, v)) in edges.into_iter().enumerate() {
            builder.add(u, v, i + 1)?;
        }
        Ok(builder.finish())
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Edges in ascending canonical order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: Vertex) -> Result<&[Vertex], GraphError> {
        self.adjacency
            .get(v as usize)
            .map(Vec::as_slice)
            .ok_or(GraphError::VertexOutOfRange {
                v,
                n: self.vertex_count(),
            })
    }

    /// Neighbor access for ids already known to be valid.
    pub(crate) fn adj(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v as usize]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        (u as usize) < self.vertex_count() && self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.has_edge(e.lo(), e.hi())
    }

    /// Returns the canonical edge if `(u, v)` is in the graph.
    pub fn edge(&self, u: Vertex, v: Vertex) -> Result<Edge, GraphError> {
        if self.has_edge(u, v) {
            Ok(Edge::new(u, v))
        } else {
            Err(GraphError::UnknownEdge { u, v })
        }
    }

    /// Parses the edge-list text format: a header `n m d` followed by `m`
    /// lines `u v`. Blank lines are skipped.
    pub fn load<R: BufRead>(input: R) -> Result<Self, GraphError> {
        let mut lines = input
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));

        let (header_line, header) = match lines.next() {
            Some((i, l)) => (i, l.map_err(|e| GraphError::Io(e.to_string()))?),
            None => {
                return Err(GraphError::Parse {
                    line: 1,
                    msg: "missing header \"n m d\"".into(),
                })
            }
        };
        let fields = parse_fields(&header, header_line, 3)?;
        let (n, m, d) = (fields[0] as usize, fields[1] as usize, fields[2] as usize);
        if d == 0 {
            return Err(GraphError::Parse {
                line: header_line,
                msg: "degree bound must be positive".into(),
            });
        }

        let mut builder = Builder::new(n, Some(d));
        let mut seen = 0usize;
        for (i, line) in lines {
            let line = line.map_err(|e| GraphError::Io(e.to_string()))?;
            seen += 1;
            if seen > m {
                return Err(GraphError::Parse {
                    line: i,
                    msg: format!("more than the declared {m} edges"),
                });
            }
            let uv = parse_fields(&line, i, 2)?;
            let (u, v) = (to_vertex(uv[0], i)?, to_vertex(uv[1], i)?);
            builder.add(u, v, i)?;
        }
        if seen < m {
            return Err(GraphError::Parse {
                line: header_line,
                msg: format!("declared {m} edges, found {seen}"),
            });
        }
        Ok(builder.finish())
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        Self::load(text.as_bytes())
    }

    /// Renders the graph in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!(
            "{} {} {}\n",
            self.vertex_count(),
            self.edge_count(),
            self.degree_bound
        );
        for e in &self.edges {
            out.push_str(&format!("{} {}\n", e.lo(), e.hi()));
        }
        out
    }

    /// Random graph with maximum degree at most `d`.
    ///
    /// Draws `10·n·d` uniform vertex pairs and keeps each one unless it is a
    /// duplicate or would push an endpoint past degree `d`. Deterministic in
    /// `seed`; may return a sparse (even empty) graph.
    pub fn random_bounded(n: usize, d: usize, seed: u64) -> Self {
        Self::random_bounded_capped(n, d, usize::MAX, seed)
    }

    /// As [`Graph::random_bounded`], stopping once `max_edges` edges are kept.
    pub fn random_bounded_capped(n: usize, d: usize, max_edges: usize, seed: u64) -> Self {
        let d = d.max(1);
        let mut builder = Builder::new(n, Some(d));
        if n < 2 {
            return builder.finish();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let proposals = 10 * n * d;
        for _ in 0..proposals {
            if builder.edges.len() >= max_edges {
                break;
            }
            let u = rng.gen_range(0..n) as Vertex;
            let v = rng.gen_range(0..n) as Vertex;
            if u == v
                || builder.adjacency[u as usize].len() >= d
                || builder.adjacency[v as usize].len() >= d
                || builder.adjacency[u as usize].contains(&v)
            {
                continue;
            }
            builder.push(u, v);
        }
        builder.finish()
    }
}

struct Builder {
    adjacency: Vec<Vec<Vertex>>,
    edges: Vec<Edge>,
    declared: Option<usize>,
}

impl Builder {
    fn new(n: usize, declared: Option<usize>) -> Self {
        Builder {
            adjacency: vec![Vec::new(); n],
            edges: Vec::new(),
            declared,
        }
    }

    fn add(&mut self, u: Vertex, v: Vertex, line: usize) -> Result<(), GraphError> {
        let n = self.adjacency.len();
        for w in [u, v] {
            if w as usize >= n {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("vertex {w} out of range 0..{n}"),
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, v: u });
        }
        if self.adjacency[u as usize].contains(&v) {
            let e = Edge::new(u, v);
            return Err(GraphError::DuplicateEdge {
                line,
                u: e.lo(),
                v: e.hi(),
            });
        }
        if let Some(bound) = self.declared {
            for w in [u, v] {
                if self.adjacency[w as usize].len() >= bound {
                    return Err(GraphError::DegreeExceeded { line, v: w, bound });
                }
            }
        }
        self.push(u, v);
        Ok(())
    }

    fn push(&mut self, u: Vertex, v: Vertex) {
        self.adjacency[u as usize].push(v);
        self.adjacency[v as usize].push(u);
        self.edges.push(Edge::new(u, v));
    }

    fn finish(mut self) -> Graph {
        for list in &mut self.adjacency {
            list.sort_unstable();
        }
        self.edges.sort_unstable();
        let observed = self.adjacency.iter().map(Vec::len).max().unwrap_or(0);
        let degree_bound = self.declared.unwrap_or(0).max(observed).max(1);
        Graph {
            adjacency: self.adjacency,
            edges: self.edges,
            degree_bound,
        }
    }
}

fn parse_fields(line: &str, line_no: usize, expected: usize) -> Result<Vec<u64>, GraphError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != expected {
        return Err(GraphError::Parse {
            line: line_no,
            msg: format!("expected {expected} integers, found {:?}", line.trim()),
        });
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<u64>().map_err(|_| GraphError::Parse {
                line: line_no,
                msg: format!("not a non-negative integer: {f:?}"),
            })
        })
        .collect()
}

fn to_vertex(x: u64, line: usize) -> Result<Vertex, GraphError> {
    Vertex::try_from(x).map_err(|_| GraphError::Parse {
        line,
        msg: format!("vertex id {x} too large"),
    })
}

/// Small named graphs used throughout the tests and examples.
pub mod named {
    use super::{Graph, Vertex};

    pub fn path(n: usize) -> Graph {
        let edges = (1..n).map(|i| ((i - 1) as Vertex, i as Vertex));
        Graph::from_edges(n, edges, None).expect("path graph")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let edges = (0..n).map(|i| (i as Vertex, ((i + 1) % n) as Vertex));
        Graph::from_edges(n, edges, None).expect("cycle graph")
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u as Vertex, v as Vertex));
            }
        }
        Graph::from_edges(n, edges, None).expect("complete graph")
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, edges, None).expect("petersen graph")
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_edges(n, std::iter::empty(), None).expect("empty graph")
    }
}
