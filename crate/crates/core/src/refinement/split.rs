use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::sparsity::is_dense_to;
use crate::RationalParam;

pub const DEFAULT_RETRY_CAP: u32 = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub t: VertexSet,
    pub t_prime: VertexSet,
    /// Rejected draws before the accepted one.
    pub retries: u32,
    pub seed: u64,
}

/// Splits `A` into `T ∪ T'` with `|T|, |T'| >= |A|/3` and `B` being
/// `(α/2)`-dense to `T`.
///
/// Requires `|A| >= 100`, `|B| <= (α/100)|A|` and `B` `α`-dense to `A`.
/// Each draw puts every vertex of `A` in `T` with probability 1/2 and is
/// accepted when `|A|/3 <= |T| <= 2|A|/3` and every `v ∈ B` has at least
/// `α|A|/3` neighbours in `T`.
pub fn balanced_dense_split(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    alpha: &RationalParam,
    seed: u64,
    retry_cap: u32,
) -> Result<SplitResult> {
    if !alpha.in_unit_interval() {
        return Err(Error::Parameter(format!("alpha = {alpha} not in (0, 1]")));
    }
    let n_a = a.len();
    if n_a < 100 {
        return Err(Error::Contract(format!("|A| >= 100 fails: |A| = {n_a}")));
    }
    if !alpha.div_int(100)?.count_le(b.len(), n_a) {
        return Err(Error::Contract(format!(
            "|B| <= (alpha/100)|A| fails: |B| = {}, alpha = {alpha}, |A| = {n_a}",
            b.len()
        )));
    }
    if !is_dense_to(g, b, a, alpha)? {
        return Err(Error::Contract(format!("B is not {alpha}-dense to A")));
    }
    let third = alpha.div_int(3)?;
    let half = alpha.div_int(2)?;
    let pool = a.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 0..retry_cap {
        let t = VertexSet::from_ids(g.n(), pool.iter().copied().filter(|_| rng.gen::<bool>()));
        let size = t.len();
        let balanced = 3 * size >= n_a && 3 * size <= 2 * n_a;
        if !balanced || !b.iter().all(|v| third.count_ge(g.degree_in(v, &t), n_a)) {
            continue;
        }
        if !is_dense_to(g, b, &t, &half)? {
            return Err(Error::Invariant(
                "accepted split leaves B below (alpha/2)-density".into(),
            ));
        }
        let t_prime = a.difference(&t);
        return Ok(SplitResult {
            t,
            t_prime,
            retries: draw,
            seed,
        });
    }
    Err(Error::ProbabilisticFailure {
        seed,
        draws: retry_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> RationalParam {
        s.parse().unwrap()
    }

    /// `a_len` independent vertices plus one extra vertex adjacent to the
    /// first `deg` of them.
    fn hub(a_len: usize, deg: usize) -> (Graph, VertexSet, VertexSet) {
        let edges: Vec<_> = (0..deg).map(|i| (i, a_len)).collect();
        let g = Graph::from_edge_list(a_len + 1, &edges).unwrap();
        let a = VertexSet::from_ids(g.n(), 0..a_len);
        let b = VertexSet::from_ids(g.n(), [a_len]);
        (g, a, b)
    }

    #[test]
    fn empty_b_only_needs_balance() {
        let g = Graph::from_edge_list(120, &[]).unwrap();
        let out = balanced_dense_split(&g, &g.vertices(), &g.empty_set(), &q("1/2"), 3, 200).unwrap();
        assert!(out.t.len() >= 40 && out.t_prime.len() >= 40);
        assert_eq!(out.t.union(&out.t_prime), g.vertices());
        assert!(out.t.is_disjoint(&out.t_prime));
    }

    #[test]
    fn hub_vertex_stays_dense() {
        for (a_len, deg, alpha) in [(100, 100, "1"), (120, 100, "5/6"), (300, 150, "1/2")] {
            let (g, a, b) = hub(a_len, deg);
            let out = balanced_dense_split(&g, &a, &b, &q(alpha), 11, 200).unwrap();
            assert!(3 * out.t.len() >= a_len && 3 * out.t_prime.len() >= a_len);
            let d = g.degree_in(a_len, &out.t);
            assert!(3 * d * q(alpha).den() as usize >= a_len * q(alpha).num() as usize);
        }
    }

    #[test]
    fn preconditions_name_the_bullet() {
        let (g, a, b) = hub(120, 60);
        // one hub vertex is more than (1/2)/100 * 120 = 0.6 vertices
        let err = balanced_dense_split(&g, &a, &b, &q("1/2"), 0, 200).unwrap_err();
        assert!(err.to_string().contains("|B| <= (alpha/100)|A|"), "{err}");
        let (g, a, b) = hub(99, 99);
        let err = balanced_dense_split(&g, &a, &b, &q("1"), 0, 200).unwrap_err();
        assert!(err.to_string().contains("|A| >= 100"), "{err}");
        let (g, a, b) = hub(300, 100);
        let err = balanced_dense_split(&g, &a, &b, &q("1/2"), 0, 200).unwrap_err();
        assert!(err.to_string().contains("dense"), "{err}");
    }

    #[test]
    fn same_seed_same_split() {
        let (g, a, b) = hub(300, 150);
        let x = balanced_dense_split(&g, &a, &b, &q("1/2"), 42, 200).unwrap();
        let y = balanced_dense_split(&g, &a, &b, &q("1/2"), 42, 200).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.t, y.t);
    }

    #[test]
    fn retry_cap_exhaustion_reports_seed() {
        let (g, a, b) = hub(300, 150);
        assert!(matches!(
            balanced_dense_split(&g, &a, &b, &q("1/2"), 5, 0),
            Err(Error::ProbabilisticFailure { seed: 5, draws: 0 })
        ));
    }
}
