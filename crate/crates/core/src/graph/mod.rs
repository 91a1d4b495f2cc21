//! Immutable simple graphs with subset-restricted degree queries.

mod clique;
mod edgelist;
mod vertex_set;

use std::borrow::Cow;

pub use clique::{find_clique_in, Adjacency};
pub use edgelist::{parse_edge_list, write_edge_list};
pub use vertex_set::{Iter, VertexSet};

use crate::error::{Error, Result};

/// Dense vertex label in `0..n`.
pub type VertexId = usize;

/// Largest vertex count accepted by default.
pub const DEFAULT_N_MAX: usize = 100_000;

/// Graphs up to this size also keep one bitset row per vertex.
const BITSET_ROWS_MAX: usize = 16_384;

/// An undirected simple graph.
///
/// Adjacency is kept as sorted neighbor lists; graphs of moderate size also
/// carry bitset rows so that `|N(v) ∩ S|` is a popcount.
#[derive(Clone)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    rows: Option<Vec<VertexSet>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a simple graph, merging duplicate pairs and dropping self-loops.
    pub fn from_edge_list(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        Self::from_edge_list_capped(n, edges, DEFAULT_N_MAX)
    }

    pub fn from_edge_list_capped(
        n: usize,
        edges: &[(VertexId, VertexId)],
        n_max: usize,
    ) -> Result<Self> {
        if n > n_max {
            return Err(Error::Input(format!("{n} vertices exceeds cap {n_max}")));
        }
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u != v {
                adj[u].push(v as u32);
                adj[v].push(u as u32);
            }
        }
        let mut edge_count = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        let rows = (n <= BITSET_ROWS_MAX).then(|| {
            adj.iter()
                .map(|list| VertexSet::from_ids(n, list.iter().map(|&w| w as usize)))
                .collect()
        });
        Ok(Self {
            adj,
            rows,
            edge_count: edge_count / 2,
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: VertexId) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n() && self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// All vertices.
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n())
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// `N(v)` as a set.
    pub fn neighbor_set(&self, v: VertexId) -> Cow<'_, VertexSet> {
        match &self.rows {
            Some(rows) => Cow::Borrowed(&rows[v]),
            None => Cow::Owned(VertexSet::from_ids(
                self.n(),
                self.adj[v].iter().map(|&w| w as usize),
            )),
        }
    }

    /// `|N(v) ∩ s|`.
    pub fn degree_in(&self, v: VertexId, s: &VertexSet) -> usize {
        assert!(v < self.n(), "vertex {v} out of range");
        let list = &self.adj[v];
        match &self.rows {
            Some(rows) if list.len() * 2 > self.n() / 64 => rows[v].intersection_len(s),
            _ => list.iter().filter(|&&w| s.contains(w as usize)).count(),
        }
    }

    /// `N(v) ∩ s`.
    pub fn neighbors_in(&self, v: VertexId, s: &VertexSet) -> VertexSet {
        match &self.rows {
            Some(rows) => rows[v].intersection(s),
            None => VertexSet::from_ids(
                self.n(),
                self.adj[v]
                    .iter()
                    .map(|&w| w as usize)
                    .filter(|&w| s.contains(w)),
            ),
        }
    }

    /// Maximum degree of the induced subgraph `G[s]`; zero for empty `s`.
    pub fn max_degree_in(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.degree_in(v, s)).max().unwrap_or(0)
    }

    /// The induced subgraph on `s`, relabeled in ascending id order, together
    /// with the map from new labels to old ones.
    pub fn induced_subgraph(&self, s: &VertexSet) -> (Graph, Vec<VertexId>) {
        let labels = s.to_vec();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in labels.iter().enumerate() {
            index[v] = i;
        }
        let edges: Vec<_> = labels
            .iter()
            .flat_map(|&u| {
                let index = &index;
                self.adj[u]
                    .iter()
                    .map(|&w| w as usize)
                    .filter(move |&w| w > u && index[w] != usize::MAX)
                    .map(move |w| (index[u], index[w]))
            })
            .collect();
        let g = Graph::from_edge_list_capped(labels.len(), &edges, usize::MAX)
            .expect("relabeled edges are in range");
        (g, labels)
    }

    /// A `q`-clique inside `within`, or `None` if there is none.
    pub fn find_clique(&self, q: usize, within: &VertexSet) -> Option<Vec<VertexId>> {
        find_clique_in(self, q, within)
    }

    /// True when every pair in `vs` is adjacent.
    pub fn is_clique(&self, vs: &[VertexId]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

impl Adjacency for Graph {
    fn universe(&self) -> usize {
        self.n()
    }

    fn row(&self, v: VertexId) -> Cow<'_, VertexSet> {
        self.neighbor_set(v)
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edge_count)
            .finish()
    }
}
