//! Finite simple graphs on vertex set `0..n`, their path metric, connected
//! components, induced subgraphs, and small-graph utilities (canonical forms,
//! isomorphism, enumeration, multipath recognition).

mod canonical;
mod multipath;

pub use canonical::{
    canonical_bits, canonical_form, enumerate_connected_graphs, find_isomorphism, isomorphic,
    CANONICAL_MAX_N,
};
pub use multipath::{
    multipath_graph, multipath_levels, recognize_multipath, sequence_of, LevelFunction,
    MultipathOutcome, MultipathSequence,
};

use std::collections::VecDeque;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) must be listed with the smaller index first")]
    UnorderedEdge(usize, usize),
    #[error("vertex set must be nonempty")]
    EmptySubset,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has {0} vertices, above the supported bound {1}")]
    TooLarge(usize, usize),
    #[error("vertex count {0} outside the supported enumeration range 1..=7")]
    EnumerationRange(usize),
    #[error("level function does not match the graph: {0}")]
    InvalidLevels(String),
    #[error("invalid edge list: {0}")]
    Parse(String),
}

/// A finite simple graph. Vertices are the indices `0..n`; adjacency is
/// symmetric and irreflexive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        Ok(Graph {
            n,
            adj: vec![false; n * n],
        })
    }

    /// Builds a graph from an edge list. Edges may be given in any order but
    /// must be in-range, loop-free, and free of duplicates.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.adjacent(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// The path with `n` vertices (length `n - 1`).
    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n).expect("path needs n >= 1");
        for i in 0..n.saturating_sub(1) {
            g.set_edge(i, i + 1, true);
        }
        g
    }

    /// The cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.set_edge(0, n - 1, true);
        g
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n).expect("complete graph needs n >= 1");
        for i in 0..n {
            for j in (i + 1)..n {
                g.set_edge(i, j, true);
            }
        }
        g
    }

    /// The star with a central vertex 0 and `leaves` pendant vertices.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::empty(leaves + 1).expect("star has at least its center");
        for leaf in 1..=leaves {
            g.set_edge(0, leaf, true);
        }
        g
    }

    /// The tripod: a center (vertex 0) with three leaves.
    pub fn tripod() -> Self {
        Graph::star(3)
    }

    /// The fan: rim path `1-2-3-4` plus a hub (vertex 0) adjacent to every
    /// rim vertex.
    pub fn fan() -> Self {
        let mut g = Graph::star(4);
        g.set_edge(1, 2, true);
        g.set_edge(2, 3, true);
        g.set_edge(3, 4, true);
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u * self.n + v]
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u * self.n + v] = present;
        self.adj[v * self.n + u] = present;
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.adjacent(u, v)).count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.adjacent(u, v))
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Breadth-first distances from `start`; unreachable vertices get the
    /// sentinel `n` (strictly larger than any path length).
    pub fn bfs_distances(&self, start: usize) -> Vec<usize> {
        let sentinel = self.n;
        let mut dist = vec![sentinel; self.n];
        let mut queue = VecDeque::new();
        dist[start] = 0;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if dist[v] == sentinel {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Shortest-path edge counts between all vertex pairs.
    pub fn path_metric(&self) -> PathMetric {
        let mut d = Vec::with_capacity(self.n * self.n);
        for v in 0..self.n {
            d.extend(self.bfs_distances(v));
        }
        PathMetric { n: self.n, d }
    }

    /// Partition of the vertices into maximal connected sets, each sorted,
    /// ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let dist = self.bfs_distances(start);
            let comp: Vec<usize> = (0..self.n).filter(|&v| dist[v] < self.n).collect();
            for &v in &comp {
                seen[v] = true;
            }
            components.push(comp);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(|&d| d < self.n)
    }

    /// The subgraph induced by `subset` together with the index remapping:
    /// new vertex `k` corresponds to the `k`-th smallest member of `subset`.
    pub fn induced_subgraph(&self, subset: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
        if subset.is_empty() {
            return Err(GraphError::EmptySubset);
        }
        let mut verts: Vec<usize> = subset.to_vec();
        verts.sort_unstable();
        verts.dedup();
        if let Some(&v) = verts.iter().find(|&&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        let mut g = Graph::empty(verts.len())?;
        for i in 0..verts.len() {
            for j in (i + 1)..verts.len() {
                if self.adjacent(verts[i], verts[j]) {
                    g.set_edge(i, j, true);
                }
            }
        }
        Ok((g, verts))
    }

    /// Parses the plain-text edge list format: first line the vertex count,
    /// then one `i j` pair per line. Blank lines are ignored.
    pub fn from_edge_list_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let first = lines
            .next()
            .ok_or_else(|| GraphError::Parse("missing vertex-count line".into()))?;
        let n: usize = first
            .parse()
            .map_err(|_| GraphError::Parse(format!("invalid vertex count {first:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let u = it
                .next()
                .ok_or_else(|| GraphError::Parse(format!("malformed edge line {line:?}")))?;
            let v = it
                .next()
                .ok_or_else(|| GraphError::Parse(format!("malformed edge line {line:?}")))?;
            if it.next().is_some() {
                return Err(GraphError::Parse(format!(
                    "edge line {line:?} has more than two fields"
                )));
            }
            let u: usize = u
                .parse()
                .map_err(|_| GraphError::Parse(format!("invalid vertex {u:?}")))?;
            let v: usize = v
                .parse()
                .map_err(|_| GraphError::Parse(format!("invalid vertex {v:?}")))?;
            edges.push((u, v));
        }
        Graph::from_edges(n, &edges)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// The path metric of a graph: shortest-path edge counts, with the vertex
/// count itself as the sentinel for unreachable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMetric {
    n: usize,
    d: Vec<usize>,
}

impl PathMetric {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.d[u * self.n + v]
    }

    pub fn is_reachable(&self, u: usize, v: usize) -> bool {
        self.distance(u, v) < self.n
    }

    /// Largest finite distance; `None` when some pair is unreachable.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                let d = self.distance(u, v);
                if d >= self.n {
                    return None;
                }
                best = best.max(d);
            }
        }
        Some(best)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.n,
            edges: self.edges(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(deserializer)?;
        for &(u, v) in &repr.edges {
            if u >= v {
                return Err(D::Error::custom(format!(
                    "edge ({u}, {v}) must satisfy i < j"
                )));
            }
        }
        Graph::from_edges(repr.n, &repr.edges).map_err(D::Error::custom)
    }
}
