//! Undirected simple graphs on vertices `0..n`.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// An undirected simple graph with sorted adjacency lists.
///
/// `allow_loops` marks the graph as implicitly loop-augmented: walk
/// enumeration may then stay in place for a step. It never adds loop edges
/// to the edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
    allow_loops: bool,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge {u}-{v} out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge {}-{}", w[0].0, w[0].1)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, edges: list, adj, allow_loops: false })
    }

    /// Like [`Graph::new`] but silently drops duplicate edges.
    pub fn from_edges_dedup(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut list: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        list.sort_unstable();
        list.dedup();
        Graph::new(n, list)
    }

    pub fn with_loops(mut self, allow: bool) -> Self {
        self.allow_loops = allow;
        self
    }

    pub fn allow_loops(&self) -> bool {
        self.allow_loops
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_clique(&self, vs: &[Vertex]) -> bool {
        vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    /// BFS distances from `src`; `usize::MAX` marks unreachable vertices.
    pub fn distances_from(&self, src: Vertex) -> Vec<usize> {
        self.distances_within(src, |_| true)
    }

    /// BFS distances from `src` restricted to vertices accepted by `keep`.
    pub fn distances_within(&self, src: Vertex, keep: impl Fn(Vertex) -> bool) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        if !keep(src) {
            return dist;
        }
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX && keep(w) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs shortest path lengths (BFS from every vertex).
    pub fn all_distances(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|v| self.distances_from(v)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.distances_from(0).iter().all(|&d| d != usize::MAX)
    }

    /// Whether the subgraph induced by `vs` is connected (empty sets count as connected).
    pub fn is_connected_subset(&self, vs: &[Vertex]) -> bool {
        let Some(&first) = vs.first() else { return true };
        let mut inside = vec![false; self.n];
        for &v in vs {
            inside[v] = true;
        }
        let dist = self.distances_within(first, |v| inside[v]);
        vs.iter().all(|&v| dist[v] != usize::MAX)
    }

    /// Induced subgraph on `vs`, relabelled to `0..vs.len()` in the given order.
    pub fn induced(&self, vs: &[Vertex]) -> Graph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vs.iter().enumerate() {
            local[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]));
        Graph::new(vs.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    /// BFS spanning tree edges of the subgraph induced by `vs`, rooted at `root`.
    /// Returns the parent of each vertex in `vs` (root maps to itself), or
    /// `None` when the induced subgraph is disconnected.
    pub fn bfs_parents(&self, root: Vertex, vs: &[Vertex]) -> Option<Vec<(Vertex, Vertex)>> {
        let mut inside = vec![false; self.n];
        for &v in vs {
            inside[v] = true;
        }
        let mut parent = vec![usize::MAX; self.n];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        let mut out = vec![(root, root)];
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if inside[w] && parent[w] == usize::MAX {
                    parent[w] = u;
                    out.push((w, u));
                    queue.push_back(w);
                }
            }
        }
        (out.len() == vs.len()).then_some(out)
    }
}
