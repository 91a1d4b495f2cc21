//! Exhaustive minimum `ε`-sparse partition for tiny graphs.
//!
//! Set partitions are walked as restricted growth strings: vertex `i` gets a
//! block label at most one above the largest label among `0..i`. The walk is
//! lexicographic, so the first partition found with the fewest blocks is the
//! canonical witness.

use spg_core::{Graph, RationalParam, VertexId};

use crate::error::{Result, WbError};

/// Largest graph the oracle accepts by default (Bell(10) = 115,975).
pub const ORACLE_MAX: usize = 10;

/// Largest graph the oracle accepts when explicitly allowed.
pub const ORACLE_MAX_EXTENDED: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub min_parts: usize,
    /// Blocks of the first optimal partition, each sorted.
    pub witness: Vec<Vec<VertexId>>,
}

/// `den·deg <= num·|block|` for every vertex of every block, using an
/// adjacency matrix. Kept apart from the core sparsity check.
pub fn blocks_are_sparse(g: &Graph, eps: &RationalParam, blocks: &[Vec<VertexId>]) -> bool {
    let (num, den) = (eps.num() as u128, eps.den() as u128);
    blocks.iter().all(|block| {
        block.iter().all(|&v| {
            let d = block.iter().filter(|&&u| g.has_edge(u, v)).count() as u128;
            d * den <= num * block.len() as u128
        })
    })
}

struct Search {
    n: usize,
    adj: Vec<Vec<bool>>,
    num: u128,
    den: u128,
    labels: Vec<usize>,
    best: Option<(usize, Vec<usize>)>,
}

impl Search {
    fn sparse(&self, blocks: usize) -> bool {
        let mut size = vec![0u128; blocks];
        for &l in &self.labels {
            size[l] += 1;
        }
        (0..self.n).all(|v| {
            let d = (0..self.n)
                .filter(|&u| self.adj[v][u] && self.labels[u] == self.labels[v])
                .count() as u128;
            d * self.den <= self.num * size[self.labels[v]]
        })
    }

    fn walk(&mut self, i: usize, blocks: usize) {
        if let Some((b, _)) = &self.best {
            if blocks >= *b {
                return;
            }
        }
        if i == self.n {
            if self.sparse(blocks) {
                self.best = Some((blocks, self.labels.clone()));
            }
            return;
        }
        for l in 0..=blocks {
            self.labels[i] = l;
            let used = if l == blocks { blocks + 1 } else { blocks };
            self.walk(i + 1, used);
        }
    }
}

/// Minimum number of `eps`-sparse blocks partitioning `V(G)`.
///
/// `allow_extended` raises the size cap from 10 to 12 vertices.
pub fn min_sparse_partition_oracle(
    g: &Graph,
    eps: &RationalParam,
    allow_extended: bool,
) -> Result<OracleResult> {
    let cap = if allow_extended {
        ORACLE_MAX_EXTENDED
    } else {
        ORACLE_MAX
    };
    let n = g.n();
    if n > cap {
        return Err(WbError::Usage(format!("oracle needs n <= {cap}, got {n}")));
    }
    if n == 0 {
        return Ok(OracleResult {
            min_parts: 0,
            witness: Vec::new(),
        });
    }
    let adj = (0..n)
        .map(|v| (0..n).map(|u| g.has_edge(u, v)).collect())
        .collect();
    let mut search = Search {
        n,
        adj,
        num: eps.num() as u128,
        den: eps.den() as u128,
        labels: vec![0; n],
        best: None,
    };
    // vertex 0 always opens block 0
    search.walk(1, 1);
    let (min_parts, labels) = search.best.expect("the all-singletons partition is sparse");
    let mut witness = vec![Vec::new(); min_parts];
    for (v, &l) in labels.iter().enumerate() {
        witness[l].push(v);
    }
    if !blocks_are_sparse(g, eps, &witness) {
        return Err(WbError::Core(spg_core::Error::Invariant(
            "oracle witness failed the sparsity re-check".into(),
        )));
    }
    Ok(OracleResult { min_parts, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> RationalParam {
        s.parse().unwrap()
    }

    fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    #[test]
    fn edgeless_one_part() {
        let g = Graph::from_edge_list(6, &[]).unwrap();
        let out = min_sparse_partition_oracle(&g, &q("1/10"), false).unwrap();
        assert_eq!(out.min_parts, 1);
        assert_eq!(out.witness, vec![(0..6).collect::<Vec<_>>()]);
    }

    #[test]
    fn k4_needs_two() {
        let out = min_sparse_partition_oracle(&complete(4), &q("1/2"), false).unwrap();
        assert_eq!(out.min_parts, 2);
        // first in canonical order: {0,1,2} is not sparse, {0,1},{2,3} is
        assert_eq!(out.witness, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn c5_one_part() {
        let edges: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let g = Graph::from_edge_list(5, &edges).unwrap();
        assert_eq!(min_sparse_partition_oracle(&g, &q("2/5"), false).unwrap().min_parts, 1);
        assert_eq!(min_sparse_partition_oracle(&g, &q("1/5"), false).unwrap().min_parts, 3);
    }

    #[test]
    fn size_cap() {
        let g = Graph::from_edge_list(11, &[]).unwrap();
        assert!(min_sparse_partition_oracle(&g, &q("1/2"), false).is_err());
        assert!(min_sparse_partition_oracle(&g, &q("1/2"), true).is_ok());
        let empty = Graph::from_edge_list(0, &[]).unwrap();
        assert_eq!(min_sparse_partition_oracle(&empty, &q("1/2"), false).unwrap().min_parts, 0);
    }

    #[test]
    fn brute_force_over_labelings_agrees() {
        // every labelling 0..n -> 0..n on a 6-vertex graph, no canonical order
        let edges = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (0, 5)];
        let g = Graph::from_edge_list(6, &edges).unwrap();
        for eps in ["1/2", "1/3", "1/4"] {
            let eps = q(eps);
            let mut best = usize::MAX;
            for code in 0..6usize.pow(6) {
                let labels: Vec<usize> = (0..6).map(|i| code / 6usize.pow(i) % 6).collect();
                let mut blocks = vec![Vec::new(); 6];
                for (v, &l) in labels.iter().enumerate() {
                    blocks[l].push(v);
                }
                blocks.retain(|b| !b.is_empty());
                if blocks_are_sparse(&g, &eps, &blocks) {
                    best = best.min(blocks.len());
                }
            }
            assert_eq!(min_sparse_partition_oracle(&g, &eps, false).unwrap().min_parts, best);
        }
    }
}
