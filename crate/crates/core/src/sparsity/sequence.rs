use super::fullness::{check_sequence_fullness, FullnessEngine, FullnessParams, DEFAULT_EXACT_CAP};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::RationalParam;

/// Finds one vertex per set, pairwise adjacent, in a
/// `(γ^{r-1}, γ^{r-1}, γ)`-full sequence of nonempty disjoint sets.
///
/// The fullness precondition is checked exhaustively in debug builds when
/// every set fits the exact engine; otherwise it is trusted and a violated
/// precondition surfaces as [`Error::SpanningClique`].
pub fn find_spanning_clique(
    g: &Graph,
    sets: &[VertexSet],
    gamma: &RationalParam,
) -> Result<Vec<VertexId>> {
    let r = sets.len();
    if r == 0 {
        return Err(Error::Parameter("need at least one set".into()));
    }
    if gamma.is_zero() || gamma.count_lt(1, 2) {
        return Err(Error::Parameter(format!("gamma = {gamma} not in (0, 1/2]")));
    }
    if let Some(i) = sets.iter().position(VertexSet::is_empty) {
        return Err(Error::Contract(format!("set {} is empty", i + 1)));
    }
    if cfg!(debug_assertions) && sets.iter().all(|s| s.len() <= DEFAULT_EXACT_CAP) {
        let threshold = gamma.pow(r as u32 - 1)?;
        let params = FullnessParams::new(threshold, threshold, *gamma)?;
        let verdict = check_sequence_fullness(g, sets, &params, &FullnessEngine::exact(), 0)?;
        if let Some(p) = verdict.pairs.iter().find(|p| !p.verdict.is_certified()) {
            return Err(Error::Contract(format!(
                "pair ({}, {}) is not ({threshold}, {threshold}, {gamma})-full",
                p.i + 1,
                p.j + 1
            )));
        }
    }
    spanning_clique_descent(g, sets, gamma)
}

/// The descent behind [`find_spanning_clique`], without the precondition
/// check: take the lowest-id vertex of the last set that is `γ`-dense to
/// every earlier set, restrict the earlier sets to its neighbourhood, repeat.
pub fn spanning_clique_descent(
    g: &Graph,
    sets: &[VertexSet],
    gamma: &RationalParam,
) -> Result<Vec<VertexId>> {
    let mut current: Vec<VertexSet> = sets.to_vec();
    let mut chosen = Vec::with_capacity(sets.len());
    for level in (0..sets.len()).rev() {
        let (earlier, rest) = current.split_at(level);
        let v = rest[0]
            .iter()
            .find(|&v| {
                earlier
                    .iter()
                    .all(|s| gamma.count_ge(g.degree_in(v, s), s.len()))
            })
            .ok_or(Error::SpanningClique { level: level + 1 })?;
        chosen.push(v);
        for s in current[..level].iter_mut() {
            *s = g.neighbors_in(v, s);
        }
    }
    chosen.reverse();
    let one_each = chosen.iter().zip(sets).all(|(&v, s)| s.contains(v));
    if !one_each || !g.is_clique(&chosen) {
        return Err(Error::Invariant(format!(
            "spanning clique descent produced {chosen:?}"
        )));
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn q(s: &str) -> RationalParam {
        s.parse().unwrap()
    }

    #[test]
    fn base_cases() {
        let g = Graph::from_edge_list(3, &[(0, 1)]).unwrap();
        assert_eq!(find_spanning_clique(&g, &[set(&g, &[2])], &q("1/2")).unwrap(), vec![2]);
        assert_eq!(
            find_spanning_clique(&g, &[set(&g, &[0]), set(&g, &[1])], &q("1/2")).unwrap(),
            vec![0, 1]
        );
    }

    #[test]
    fn tripartite_triangle() {
        let mut edges = Vec::new();
        for u in 0..12 {
            for w in u + 1..12 {
                if u / 4 != w / 4 {
                    edges.push((u, w));
                }
            }
        }
        let g = Graph::from_edge_list(12, &edges).unwrap();
        let sets = [set(&g, &[0, 1, 2, 3]), set(&g, &[4, 5, 6, 7]), set(&g, &[8, 9, 10, 11])];
        let c = find_spanning_clique(&g, &sets, &q("1/2")).unwrap();
        assert_eq!(c.len(), 3);
        assert!(g.is_clique(&c));
        for (v, s) in c.iter().zip(&sets) {
            assert!(s.contains(*v));
        }
    }

    #[test]
    fn failures_are_structured() {
        let g = Graph::from_edge_list(2, &[]).unwrap();
        let sets = [set(&g, &[0]), set(&g, &[1])];
        assert!(matches!(
            spanning_clique_descent(&g, &sets, &q("1/2")),
            Err(Error::SpanningClique { level: 2 })
        ));
        // with debug assertions the precondition check catches it first
        assert!(find_spanning_clique(&g, &sets, &q("1/2")).is_err());
        assert!(find_spanning_clique(&g, &sets, &q("3/4")).is_err());
        assert!(find_spanning_clique(&g, &[], &q("1/2")).is_err());
        assert!(find_spanning_clique(&g, &[g.empty_set()], &q("1/2")).is_err());
    }
}
