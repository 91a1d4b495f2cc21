//! Iterative densification of a dense pair into a full pair.
//!
//! Starting from `B` being `α`-dense to `A`, repeatedly ask a fullness engine
//! for a witness `(X, Y)` against `(α^l, β, α/2)`-fullness of `(A', B')` and
//! replace `A' ← A' \ X`, `B' ← Y`. Each step keeps every vertex of `B'`
//! adjacent to at least `(α/2)(|A| + |A'|)` vertices of `A'`, which caps the
//! number of steps at `(1/α)^{2l}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extraction::LOG_TOLERANCE;
use crate::graph::{Graph, VertexSet};
use crate::scalar::{log2_count, log_le, Tower};
use crate::seed::derive_seed;
use crate::sparsity::{is_dense_to, FullnessEngine, FullnessParams, FullnessVerdict};
use crate::RationalParam;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefineTrace {
    pub iterations: usize,
    /// `|X|` removed from `A'` at each step.
    pub removed: Vec<usize>,
    /// `|B'|` after each step.
    pub kept: Vec<usize>,
    /// The final pair was certified full (exact engine only).
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefineOutcome {
    pub a_prime: VertexSet,
    pub b_prime: VertexSet,
    pub trace: RefineTrace,
}

struct Bounds<'a> {
    a: &'a VertexSet,
    b: &'a VertexSet,
    half_alpha: RationalParam,
    shrink_log2: f64,
    beta_log2: f64,
}

impl Bounds<'_> {
    fn check(&self, g: &Graph, a_prime: &VertexSet, b_prime: &VertexSet, n: usize) -> Result<()> {
        let tol = LOG_TOLERANCE;
        let a_cap = n as f64 * self.shrink_log2 + log2_count::<f64>(self.a.len());
        if !log_le(log2_count::<f64>(a_prime.len()), a_cap, tol) {
            return Err(Error::Invariant(format!(
                "|A'| = {} above (1 - alpha^l)^{n} |A|",
                a_prime.len()
            )));
        }
        let b_floor = n as f64 * self.beta_log2 + log2_count::<f64>(self.b.len());
        if !log_le(b_floor, log2_count::<f64>(b_prime.len()), tol) {
            return Err(Error::Invariant(format!(
                "|B'| = {} below beta^{n} |B|",
                b_prime.len()
            )));
        }
        let reach = self.a.len() + a_prime.len();
        if let Some(v) = b_prime
            .iter()
            .find(|&v| !self.half_alpha.count_ge(g.degree_in(v, a_prime), reach))
        {
            return Err(Error::Invariant(format!(
                "vertex {v} has fewer than (alpha/2)(|A| + |A'|) neighbours in A' after {n} steps"
            )));
        }
        Ok(())
    }
}

/// Shrinks `(A, B)` to `(A', B')` that no engine query can show to violate
/// `(α^l, β, α/2)`-fullness, with `|A'| >= (α/2)|A|` and
/// `|B'| >= β^{(1/α)^{2l}}|B|`.
///
/// With an exact engine the result is certified full.
pub fn refine_pair(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    alpha: &RationalParam,
    beta: &RationalParam,
    l: u32,
    engine: &FullnessEngine,
    seed: u64,
) -> Result<RefineOutcome> {
    for (name, p) in [("alpha", alpha), ("beta", beta)] {
        if !p.in_unit_interval() {
            return Err(Error::Parameter(format!("{name} = {p} not in (0, 1]")));
        }
    }
    if l == 0 {
        return Err(Error::Parameter("l must be at least 1".into()));
    }
    if !is_dense_to(g, b, a, alpha)? {
        return Err(Error::Contract(format!("B is not {alpha}-dense to A")));
    }
    let alpha_l = alpha.pow(l)?;
    let half_alpha = alpha.div_int(2)?;
    let params = FullnessParams::new(alpha_l, *beta, half_alpha)?;
    let bounds = Bounds {
        a,
        b,
        half_alpha,
        shrink_log2: alpha_l.one_minus()?.log2::<f64>(),
        beta_log2: beta.log2::<f64>(),
    };
    // iteration cap ⌈(1/α)^{2l}⌉, when it fits
    let step_cap = alpha
        .inverse_pow_floor(2 * l as u64)
        .map(|f| f.saturating_add(1));

    let mut a_prime = a.clone();
    let mut b_prime = b.clone();
    let mut trace = RefineTrace::default();
    loop {
        let n = trace.iterations;
        bounds.check(g, &a_prime, &b_prime, n)?;
        let exact = engine.is_exact_for(a_prime.len());
        let verdict = engine.check(g, &a_prime, &b_prime, &params, derive_seed(seed, &[n as u64]))?;
        match verdict {
            FullnessVerdict::Violated { x, y } => {
                a_prime.difference_with(&x);
                b_prime = y;
                trace.iterations += 1;
                trace.removed.push(x.len());
                trace.kept.push(b_prime.len());
                if exact && step_cap.is_some_and(|cap| trace.iterations as u128 > cap) {
                    return Err(Error::Invariant(format!(
                        "pairs refinement ran {} steps, past (1/alpha)^(2l)",
                        trace.iterations
                    )));
                }
            }
            FullnessVerdict::Certified => {
                trace.certified = true;
                break;
            }
            FullnessVerdict::Unknown(_) => break,
        }
    }

    if !half_alpha.count_ge(a_prime.len(), a.len()) {
        return Err(Error::Invariant(format!(
            "|A'| = {} below (alpha/2)|A|",
            a_prime.len()
        )));
    }
    let floor = Tower::<f64>::new(
        log2_count(b.len()),
        beta.log2(),
        2.0 * l as f64 * -alpha.log2::<f64>(),
    );
    if !b.is_empty() && !log_le(floor.log2(), log2_count(b_prime.len()), LOG_TOLERANCE) {
        return Err(Error::Invariant(format!(
            "|B'| = {} below beta^((1/alpha)^(2l)) |B|",
            b_prime.len()
        )));
    }
    Ok(RefineOutcome {
        a_prime,
        b_prime,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::sparsity::check_fullness_exact;

    fn q(s: &str) -> RationalParam {
        s.parse().unwrap()
    }

    #[test]
    fn complete_pair_needs_no_steps() {
        let g = complete_bipartite(5, 3);
        let a = set(&g, &[0, 1, 2, 3, 4]);
        let b = set(&g, &[5, 6, 7]);
        let out = refine_pair(&g, &a, &b, &q("1/2"), &q("1/2"), 1, &FullnessEngine::exact(), 0).unwrap();
        assert_eq!(out.trace.iterations, 0);
        assert!(out.trace.certified);
        assert_eq!(out.a_prime, a);
        assert_eq!(out.b_prime, b);
    }

    #[test]
    fn worked_example() {
        // A = {0,1,2,3}; b1 = 4 adjacent to all of A, b2 = 5 adjacent to 0 only
        let g = Graph::from_edge_list(6, &[(0, 4), (1, 4), (2, 4), (3, 4), (0, 5)]).unwrap();
        let a = set(&g, &[0, 1, 2, 3]);
        let b = set(&g, &[4, 5]);
        let (alpha, beta) = (q("1/4"), q("1/4"));
        let out = refine_pair(&g, &a, &b, &alpha, &beta, 1, &FullnessEngine::exact(), 0).unwrap();
        assert_eq!(out.a_prime.to_vec(), vec![0]);
        assert_eq!(out.b_prime.to_vec(), vec![5]);
        assert_eq!(out.trace.iterations, 3);
        assert_eq!(out.trace.removed, vec![1, 1, 1]);
        assert!(out.trace.certified);
        let params = FullnessParams::new(q("1/4"), beta, q("1/8")).unwrap();
        assert!(check_fullness_exact(&g, &out.a_prime, &out.b_prime, &params, 20)
            .unwrap()
            .is_certified());
    }

    #[test]
    fn empty_b_is_vacuous() {
        let g = Graph::from_edge_list(4, &[]).unwrap();
        let a = set(&g, &[0, 1, 2]);
        let out = refine_pair(&g, &a, &g.empty_set(), &q("1/2"), &q("1/2"), 1, &FullnessEngine::exact(), 0).unwrap();
        assert_eq!(out.trace.iterations, 0);
        assert_eq!(out.a_prime, a);
        assert!(out.b_prime.is_empty());
    }

    #[test]
    fn sparse_b_is_rejected() {
        let g = Graph::from_edge_list(4, &[]).unwrap();
        let err = refine_pair(&g, &set(&g, &[0, 1]), &set(&g, &[2]), &q("1/2"), &q("1/2"), 1, &FullnessEngine::exact(), 0)
            .unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn heuristic_engine_keeps_bounds() {
        // B-vertices each see half of a 40-vertex A in overlapping windows
        let mut edges = Vec::new();
        for j in 0..10 {
            for i in 0..20 {
                edges.push(((j * 3 + i) % 40, 40 + j));
            }
        }
        let g = Graph::from_edge_list(50, &edges).unwrap();
        let a = VertexSet::from_ids(50, 0..40);
        let b = VertexSet::from_ids(50, 40..50);
        let out = refine_pair(&g, &a, &b, &q("1/2"), &q("1/4"), 1, &FullnessEngine::default(), 9).unwrap();
        assert!(out.a_prime.len() >= 10);
        assert!(!out.b_prime.is_empty());
        assert!(out.trace.iterations <= 16);
    }
}
