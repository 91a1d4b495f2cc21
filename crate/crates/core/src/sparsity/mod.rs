//! Sparse sets, density between sets, and fullness of pairs and sequences.

mod fullness;
mod sequence;

pub use fullness::{
    check_fullness_exact, check_sequence_fullness, search_fullness_violation, verify_violation,
    FullnessEngine, FullnessParams, FullnessVerdict, HeuristicConfig, PairVerdict, SearchReport,
    SequenceVerdict, Strategy, VerdictRecord, DEFAULT_EXACT_CAP,
};
pub use sequence::{find_spanning_clique, spanning_clique_descent};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::RationalParam;

/// `G[s]` has maximum degree at most `eps·|s|`. The empty set is sparse.
pub fn is_sparse_set(g: &Graph, s: &VertexSet, eps: &RationalParam) -> bool {
    eps.count_le(g.max_degree_in(s), s.len())
}

fn require_disjoint(b: &VertexSet, a: &VertexSet) -> Result<()> {
    if b.is_disjoint(a) {
        Ok(())
    } else {
        Err(Error::Contract(format!(
            "sets must be disjoint; both contain {:?}",
            b.intersection(a).first()
        )))
    }
}

/// Every vertex of `b` has at least `alpha·|a|` neighbours in `a`.
pub fn is_dense_to(g: &Graph, b: &VertexSet, a: &VertexSet, alpha: &RationalParam) -> Result<bool> {
    require_disjoint(b, a)?;
    Ok(b.iter().all(|v| alpha.count_ge(g.degree_in(v, a), a.len())))
}

/// Every vertex of `b` has at most `alpha·|a|` neighbours in `a`.
pub fn is_sparse_to(
    g: &Graph,
    b: &VertexSet,
    a: &VertexSet,
    alpha: &RationalParam,
) -> Result<bool> {
    require_disjoint(b, a)?;
    Ok(b.iter().all(|v| alpha.count_le(g.degree_in(v, a), a.len())))
}
