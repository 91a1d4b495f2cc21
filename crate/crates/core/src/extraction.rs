//! Greedy extraction of sparse sets from clique-bounded graphs.
//!
//! In a `K_{r+1}`-free graph, descending into a high-degree neighbourhood at
//! most `r - 1` times reaches an `α`-sparse set keeping at least an
//! `α^{r-1}` fraction of the start. Repeating that on what is left covers all
//! but a tiny leftover with few sparse parts.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::scalar::{lit, Real, Tower};
use crate::sparsity::is_sparse_set;
use crate::RationalParam;

/// Log-domain tolerance for bound assertions.
pub const LOG_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionResult {
    pub part: VertexSet,
    /// The high-degree vertices descended through, in order.
    pub descent_trace: Vec<VertexId>,
}

/// Descends from `s0` into neighbourhoods until the current set is
/// `alpha`-sparse, always taking the lowest-id vertex with at least
/// `alpha·|S|` neighbours in `S`.
///
/// Needing an `r`-th descent proves `G[s0]` contains `K_{r+1}`; the error
/// then carries that clique.
pub fn extract_sparse_set(
    g: &Graph,
    s0: &VertexSet,
    alpha: &RationalParam,
    r: usize,
) -> Result<ExtractionResult> {
    if !alpha.in_unit_interval() {
        return Err(Error::Parameter(format!("alpha = {alpha} not in (0, 1]")));
    }
    if r == 0 {
        return Err(Error::Parameter("r must be at least 1".into()));
    }
    let mut s = s0.clone();
    let mut trace = Vec::new();
    while !is_sparse_set(g, &s, alpha) {
        let v = s
            .iter()
            .find(|&v| alpha.count_ge(g.degree_in(v, &s), s.len()))
            .expect("a non-sparse set has a vertex of degree above the threshold");
        if trace.len() + 1 == r {
            let u = g
                .neighbors_in(v, &s)
                .first()
                .expect("qualifying vertex has a neighbour in the set");
            let mut witness = trace.clone();
            witness.extend([v, u]);
            witness.sort_unstable();
            if !g.is_clique(&witness) {
                return Err(Error::Invariant(format!(
                    "descent trace {witness:?} is not a clique"
                )));
            }
            return Err(Error::NotCliqueFree { witness });
        }
        trace.push(v);
        s = g.neighbors_in(v, &s);
    }
    if !alpha.count_ge_pow(s.len(), s0.len(), trace.len() as u32) {
        return Err(Error::Invariant(format!(
            "descent of depth {} kept {} of {} vertices",
            trace.len(),
            s.len(),
            s0.len()
        )));
    }
    Ok(ExtractionResult {
        part: s,
        descent_trace: trace,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyPartition {
    pub parts: Vec<VertexSet>,
    pub leftover: VertexSet,
    /// Number of extractions allowed.
    pub budget: u128,
    /// Total descent steps over all extractions.
    pub descents: usize,
}

/// `α^{(r-1)(1/α)^m} · total` as a tower.
pub fn leftover_bound<F: Real>(alpha: &RationalParam, r: usize, m: u64, total: usize) -> Tower<F> {
    let inv_log2: F = -alpha.log2::<F>();
    let coeff = if total == 0 {
        F::neg_infinity()
    } else {
        F::from_usize(total).unwrap().log2()
    };
    let exponent = F::from_usize(r - 1).unwrap().log2() + F::from_u64(m).unwrap() * inv_log2;
    Tower::new(coeff, alpha.log2::<F>(), exponent)
}

fn check_partition_args(alpha: &RationalParam, r: usize) -> Result<()> {
    if alpha.is_zero() || alpha.count_lt(1, 2) {
        return Err(Error::Parameter(format!("alpha = {alpha} not in (0, 1/2]")));
    }
    if r < 2 {
        return Err(Error::Parameter("r must be at least 2".into()));
    }
    Ok(())
}

/// Extracts `alpha`-sparse parts from `s0` greedily, up to
/// `⌊(1/α)^{m+2r-1}⌋` of them or until nothing is left, then asserts the
/// leftover bound `|L| <= α^{(r-1)(1/α)^m}|s0|`.
pub fn partition_most(
    g: &Graph,
    s0: &VertexSet,
    alpha: &RationalParam,
    r: usize,
    m: u64,
) -> Result<GreedyPartition> {
    check_partition_args(alpha, r)?;
    let exponent = m + 2 * r as u64 - 1;
    let budget = alpha
        .inverse_pow_floor(exponent)
        .ok_or_else(|| Error::BudgetOverflow {
            alpha: alpha.to_string(),
            exponent,
        })?;
    let mut out = greedy_partition(g, s0, alpha, r, usize::try_from(budget).unwrap_or(usize::MAX))?;
    out.budget = budget;
    let bound = leftover_bound::<f64>(alpha, r, m, s0.len());
    if !bound.bounds(out.leftover.len(), lit(LOG_TOLERANCE)) {
        return Err(Error::Invariant(format!(
            "leftover {} exceeds 2^{:.6}",
            out.leftover.len(),
            bound.log2()
        )));
    }
    Ok(out)
}

/// Number of extractions worth attempting on a set of `len` vertices when
/// the budget is `⌊(1/α)^exponent⌋`; budgets past `len` never bind.
pub(crate) fn effective_budget(alpha: &RationalParam, exponent: u64, len: usize) -> usize {
    match alpha.inverse_pow_floor(exponent) {
        Some(b) => usize::try_from(b).unwrap_or(usize::MAX).min(len),
        None => len,
    }
}

/// The extraction loop of [`partition_most`] with an explicit budget and no
/// leftover assertion.
pub(crate) fn greedy_partition(
    g: &Graph,
    s0: &VertexSet,
    alpha: &RationalParam,
    r: usize,
    budget: usize,
) -> Result<GreedyPartition> {
    check_partition_args(alpha, r)?;
    let mut rest = s0.clone();
    let mut parts = Vec::new();
    let mut descents = 0;
    while parts.len() < budget && !rest.is_empty() {
        let ExtractionResult {
            part,
            descent_trace,
        } = extract_sparse_set(g, &rest, alpha, r)?;
        descents += descent_trace.len();
        rest.difference_with(&part);
        parts.push(part);
    }
    Ok(GreedyPartition {
        parts,
        leftover: rest,
        budget: budget as u128,
        descents,
    })
}

/// `ln((1-x)^{(1/x)^s}) - ln(x^{(1/x)^{s-2}})`; non-positive on the whole
/// domain `0 < x < 1`, `s >= 1`.
pub fn approx_log_margin<F: Real>(x: &RationalParam, s: F) -> Result<F> {
    if x.is_zero() || x.num() >= x.den() {
        return Err(Error::Parameter(format!("x = {x} not in (0, 1)")));
    }
    if !(s >= F::one()) {
        return Err(Error::Parameter(format!("s = {s} below 1")));
    }
    let ln_x = x.log2::<F>() * F::LN_2();
    let ln_one_minus_x = x.one_minus()?.log2::<F>() * F::LN_2();
    let inv_ln = -ln_x;
    let lhs = (s * inv_ln).exp() * ln_one_minus_x;
    let rhs = ((s - lit::<F>(2.0)) * inv_ln).exp() * ln_x;
    Ok(lhs - rhs)
}

/// `(1/x)^2 ln(1-x) - ln(x)`: the margin above divided by `(1/x)^{s-2}`.
pub fn approx_reduced_margin<F: Real>(x: &RationalParam) -> Result<F> {
    if x.is_zero() || x.num() >= x.den() {
        return Err(Error::Parameter(format!("x = {x} not in (0, 1)")));
    }
    let ln_x = x.log2::<F>() * F::LN_2();
    let ln_one_minus_x = x.one_minus()?.log2::<F>() * F::LN_2();
    Ok((-lit::<F>(2.0) * ln_x).exp() * ln_one_minus_x - ln_x)
}
