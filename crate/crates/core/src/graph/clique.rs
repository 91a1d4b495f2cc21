use std::borrow::Cow;

use super::{VertexId, VertexSet};

/// Anything that can hand out neighbor rows as bitsets.
pub trait Adjacency {
    fn universe(&self) -> usize;
    fn row(&self, v: VertexId) -> Cow<'_, VertexSet>;
}

/// Searches for a `q`-clique among `within`.
///
/// Branch and bound over candidate bitsets, pruned with a greedy colouring
/// bound. The returned clique is sorted and checked pairwise before return.
pub fn find_clique_in<A: Adjacency + ?Sized>(
    adj: &A,
    q: usize,
    within: &VertexSet,
) -> Option<Vec<VertexId>> {
    assert!(q >= 1, "clique size must be positive");
    let mut clique = Vec::with_capacity(q);
    if !extend(adj, q, &mut clique, within.clone()) {
        return None;
    }
    clique.sort_unstable();
    for (i, &u) in clique.iter().enumerate() {
        for &v in &clique[i + 1..] {
            assert!(adj.row(u).contains(v), "clique search returned a non-edge");
        }
    }
    Some(clique)
}

fn extend<A: Adjacency + ?Sized>(
    adj: &A,
    q: usize,
    clique: &mut Vec<VertexId>,
    mut candidates: VertexSet,
) -> bool {
    if clique.len() == q {
        return true;
    }
    let need = q - clique.len();
    if candidates.len() < need {
        return false;
    }
    if need > 2 && colour_bound(adj, &candidates, need) < need {
        return false;
    }
    while let Some(v) = candidates.first() {
        candidates.remove(v);
        clique.push(v);
        let next = adj.row(v).intersection(&candidates);
        if extend(adj, q, clique, next) {
            return true;
        }
        clique.pop();
        if candidates.len() < need {
            return false;
        }
    }
    false
}

/// Number of colour classes in a greedy colouring, stopping once `enough`
/// classes have been formed.
fn colour_bound<A: Adjacency + ?Sized>(adj: &A, candidates: &VertexSet, enough: usize) -> usize {
    let mut uncoloured = candidates.clone();
    let mut colours = 0;
    while !uncoloured.is_empty() && colours < enough {
        colours += 1;
        let mut open = uncoloured.clone();
        while let Some(v) = open.first() {
            open.remove(v);
            uncoloured.remove(v);
            open.difference_with(&adj.row(v));
        }
    }
    colours
}
