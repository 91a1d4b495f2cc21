//! Fullness of vertex-set pairs.
//!
//! `(A, B)` is `(α, β, γ)`-full when for every `X ⊆ A` with `|X| ≥ α|A|`, all
//! but at most `β|B|` vertices of `B` are `γ`-dense to `X`. A violation is a
//! pair `(X, Y)` with `|X| ≥ ⌈α|A|⌉`, `|Y| > β|B|` and every `y ∈ Y` having
//! fewer than `γ|X|` neighbours in `X`.
//!
//! Two engines: exhaustive enumeration over subsets of `A` (exact, capped),
//! and a search over a few candidate families (sound, incomplete).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::require_disjoint;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::RationalParam;

/// Default largest `|A|` the exact engine enumerates.
pub const DEFAULT_EXACT_CAP: usize = 20;

/// Hard ceiling on the exact cap; `2^30` subsets is already hours of work.
const EXACT_CAP_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullnessParams {
    /// Subset-size fraction.
    pub alpha: RationalParam,
    /// Exception fraction.
    pub beta: RationalParam,
    /// Density threshold.
    pub gamma: RationalParam,
}

impl FullnessParams {
    pub fn new(alpha: RationalParam, beta: RationalParam, gamma: RationalParam) -> Result<Self> {
        for (name, p) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !p.in_unit_interval() {
                return Err(Error::Parameter(format!("{name} = {p} not in (0, 1]")));
            }
        }
        Ok(Self { alpha, beta, gamma })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FullnessVerdict {
    Certified,
    Violated { x: VertexSet, y: VertexSet },
    Unknown(SearchReport),
}

impl FullnessVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, FullnessVerdict::Certified)
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, FullnessVerdict::Violated { .. })
    }

    /// Structured record for certificates and logs.
    pub fn record(&self, engine: &str, params: &FullnessParams) -> VerdictRecord {
        let (verdict, x, y, report) = match self {
            FullnessVerdict::Certified => ("certified", None, None, None),
            FullnessVerdict::Violated { x, y } => {
                ("violated", Some(x.to_vec()), Some(y.to_vec()), None)
            }
            FullnessVerdict::Unknown(r) => ("unknown", None, None, Some(r.clone())),
        };
        VerdictRecord {
            engine: engine.to_string(),
            alpha: params.alpha,
            beta: params.beta,
            gamma: params.gamma,
            verdict: verdict.to_string(),
            x,
            y,
            report,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub engine: String,
    pub alpha: RationalParam,
    pub beta: RationalParam,
    pub gamma: RationalParam,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<VertexId>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<VertexId>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<SearchReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// `X = A \ N(b)` per vertex `b`, padded or truncated to the size floor.
    NonNeighbors,
    /// Peel `A` one vertex at a time, maximising newly sparse `B`-vertices.
    GreedyPeel,
    /// Uniform random subsets at a few sizes.
    RandomSubsets,
}

/// Candidates tried per strategy by an unsuccessful heuristic search.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub tested: Vec<(Strategy, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicConfig {
    pub strategies: Vec<Strategy>,
    /// Random subsets drawn at each size.
    pub random_subsets: usize,
    /// Maximum number of peel steps.
    pub peel_steps: usize,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self {
            strategies: vec![
                Strategy::NonNeighbors,
                Strategy::GreedyPeel,
                Strategy::RandomSubsets,
            ],
            random_subsets: 8,
            peel_steps: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FullnessEngine {
    Exact { cap: usize },
    Heuristic(HeuristicConfig),
    /// Exact when `|A|` is within `cap`, heuristic otherwise.
    Auto { cap: usize, heuristic: HeuristicConfig },
}

impl Default for FullnessEngine {
    fn default() -> Self {
        FullnessEngine::Auto {
            cap: DEFAULT_EXACT_CAP,
            heuristic: HeuristicConfig::default(),
        }
    }
}

impl FullnessEngine {
    pub fn exact() -> Self {
        FullnessEngine::Exact {
            cap: DEFAULT_EXACT_CAP,
        }
    }

    /// Whether a run on an `A` of this size is exhaustive.
    pub fn is_exact_for(&self, a_len: usize) -> bool {
        match self {
            FullnessEngine::Exact { .. } => true,
            FullnessEngine::Heuristic(_) => false,
            FullnessEngine::Auto { cap, .. } => a_len <= *cap,
        }
    }

    pub fn name_for(&self, a_len: usize) -> &'static str {
        if self.is_exact_for(a_len) {
            "exact"
        } else {
            "heuristic"
        }
    }

    pub fn check(
        &self,
        g: &Graph,
        a: &VertexSet,
        b: &VertexSet,
        params: &FullnessParams,
        seed: u64,
    ) -> Result<FullnessVerdict> {
        match self {
            FullnessEngine::Exact { cap } => check_fullness_exact(g, a, b, params, *cap),
            FullnessEngine::Heuristic(h) => search_fullness_violation(g, a, b, params, h, seed),
            FullnessEngine::Auto { cap, heuristic } => {
                if a.len() <= *cap {
                    check_fullness_exact(g, a, b, params, *cap)
                } else {
                    search_fullness_violation(g, a, b, params, heuristic, seed)
                }
            }
        }
    }
}

/// Re-checks a claimed violation against the definition.
pub fn verify_violation(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    params: &FullnessParams,
    x: &VertexSet,
    y: &VertexSet,
) -> bool {
    x.is_subset(a)
        && y.is_subset(b)
        && params.alpha.count_ge(x.len(), a.len())
        && params.beta.count_gt(y.len(), b.len())
        && y.iter()
            .all(|v| params.gamma.count_lt(g.degree_in(v, x), x.len()))
}

fn checked_violation(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    params: &FullnessParams,
    x: VertexSet,
    y: VertexSet,
) -> Result<FullnessVerdict> {
    if verify_violation(g, a, b, params, &x, &y) {
        Ok(FullnessVerdict::Violated { x, y })
    } else {
        Err(Error::Invariant(format!(
            "fullness witness failed re-verification: X = {x:?}, Y = {y:?}"
        )))
    }
}

/// Exhaustive fullness check over all subsets of `A` of admissible size,
/// in increasing bitmask order (bit `i` is the `i`-th smallest vertex of `A`).
pub fn check_fullness_exact(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    params: &FullnessParams,
    cap: usize,
) -> Result<FullnessVerdict> {
    require_disjoint(b, a)?;
    let cap = cap.min(EXACT_CAP_LIMIT);
    if a.len() > cap {
        return Err(Error::Capacity { size: a.len(), cap });
    }
    let a_list = a.to_vec();
    let k = a_list.len();
    let b_list = b.to_vec();
    let min_size = params.alpha.ceil_of(k);
    // neighbour masks of B-vertices over the positions of A
    let masks: Vec<u32> = b_list
        .iter()
        .map(|&v| {
            a_list
                .iter()
                .enumerate()
                .filter(|&(_, &w)| g.has_edge(v, w))
                .fold(0u32, |m, (i, _)| m | 1 << i)
        })
        .collect();
    // a vertex is γ-dense to X iff it has at least ⌈γ|X|⌉ neighbours there
    let need: Vec<u32> = (0..=k).map(|s| params.gamma.ceil_of(s) as u32).collect();
    let allowed = (0..=b_list.len())
        .take_while(|&c| params.beta.count_le(c, b_list.len()))
        .last()
        .unwrap_or(0);

    for mask in 0u64..1u64 << k {
        let mask = mask as u32;
        let size = mask.count_ones() as usize;
        if size < min_size {
            continue;
        }
        let bad = masks
            .iter()
            .filter(|&&m| (m & mask).count_ones() < need[size])
            .count();
        if bad > allowed {
            let x = VertexSet::from_ids(
                g.n(),
                (0..k).filter(|i| mask >> i & 1 == 1).map(|i| a_list[i]),
            );
            let y = VertexSet::from_ids(
                g.n(),
                b_list
                    .iter()
                    .zip(&masks)
                    .filter(|&(_, &m)| (m & mask).count_ones() < need[size])
                    .map(|(&v, _)| v),
            );
            return checked_violation(g, a, b, params, x, y);
        }
    }
    Ok(FullnessVerdict::Certified)
}

struct Probe<'a> {
    g: &'a Graph,
    b: &'a VertexSet,
    params: &'a FullnessParams,
    min_size: usize,
}

impl Probe<'_> {
    /// The non-dense part of `B` if `x` witnesses a violation.
    fn test(&self, x: &VertexSet) -> Option<VertexSet> {
        if x.len() < self.min_size {
            return None;
        }
        let mut y = VertexSet::new(self.g.n());
        for v in self.b {
            if self.params.gamma.count_lt(self.g.degree_in(v, x), x.len()) {
                y.insert(v);
            }
        }
        self.params
            .beta
            .count_gt(y.len(), self.b.len())
            .then_some(y)
    }
}

/// Searches for a fullness violation with the configured strategies.
/// Returns `Violated` (re-verified) or `Unknown`; never `Certified`.
pub fn search_fullness_violation(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    params: &FullnessParams,
    config: &HeuristicConfig,
    seed: u64,
) -> Result<FullnessVerdict> {
    require_disjoint(b, a)?;
    let probe = Probe {
        g,
        b,
        params,
        min_size: params.alpha.ceil_of(a.len()),
    };
    let mut report = SearchReport::default();
    if b.is_empty() {
        return Ok(FullnessVerdict::Unknown(report));
    }
    for &strategy in &config.strategies {
        let (found, tested) = match strategy {
            Strategy::NonNeighbors => non_neighbour_candidates(&probe, a),
            Strategy::GreedyPeel => greedy_peel(&probe, a, config.peel_steps),
            Strategy::RandomSubsets => random_subsets(&probe, a, config.random_subsets, seed),
        };
        report.tested.push((strategy, tested));
        if let Some((x, y)) = found {
            return checked_violation(g, a, b, params, x, y);
        }
    }
    Ok(FullnessVerdict::Unknown(report))
}

type Found = Option<(VertexSet, VertexSet)>;

fn non_neighbour_candidates(probe: &Probe<'_>, a: &VertexSet) -> (Found, usize) {
    let mut tested = 0;
    let t = probe.min_size;
    for v in probe.b {
        let outside = a.difference(&probe.g.neighbor_set(v));
        let order: Vec<VertexId> = outside
            .iter()
            .chain(a.intersection(&probe.g.neighbor_set(v)).iter())
            .collect();
        let mut sizes = vec![t, outside.len().max(t)];
        sizes.dedup();
        for size in sizes {
            if size > order.len() {
                continue;
            }
            let x = VertexSet::from_ids(probe.g.n(), order[..size].iter().copied());
            tested += 1;
            if let Some(y) = probe.test(&x) {
                return (Some((x, y)), tested);
            }
        }
    }
    (None, tested)
}

fn greedy_peel(probe: &Probe<'_>, a: &VertexSet, max_steps: usize) -> (Found, usize) {
    let g = probe.g;
    let gamma = &probe.params.gamma;
    let mut x = a.clone();
    let b_list = probe.b.to_vec();
    let mut deg: Vec<usize> = b_list.iter().map(|&v| g.degree_in(v, &x)).collect();
    let mut tested = 0;
    for _ in 0..=max_steps {
        if x.len() < probe.min_size {
            break;
        }
        tested += 1;
        if let Some(y) = probe.test(&x) {
            return (Some((x, y)), tested);
        }
        if x.len() == probe.min_size || x.is_empty() {
            break;
        }
        // B-vertices that turn non-dense iff the removed vertex is a neighbour
        let need = gamma.ceil_of(x.len() - 1);
        let borderline = VertexSet::from_ids(
            g.n(),
            b_list
                .iter()
                .zip(&deg)
                .filter(|&(_, &d)| d == need && need > 0)
                .map(|(&v, _)| v),
        );
        let victim = x
            .iter()
            .map(|w| (g.degree_in(w, &borderline), w))
            .max_by(|l, r| l.0.cmp(&r.0).then(r.1.cmp(&l.1)))
            .map(|(_, w)| w)
            .expect("x is nonempty");
        x.remove(victim);
        for (i, &v) in b_list.iter().enumerate() {
            if g.has_edge(v, victim) {
                deg[i] -= 1;
            }
        }
    }
    (None, tested)
}

fn random_subsets(probe: &Probe<'_>, a: &VertexSet, per_size: usize, seed: u64) -> (Found, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = a.to_vec();
    let t = probe.min_size;
    let mut sizes = vec![t, probe.params.alpha.ceil_of(2 * a.len()).min(pool.len())];
    if pool.len() / 2 >= t {
        sizes.push(pool.len() / 2);
    }
    sizes.sort_unstable();
    sizes.dedup();
    let mut tested = 0;
    for size in sizes {
        for _ in 0..per_size {
            let mut shuffled = pool.clone();
            let (picked, _) = shuffled.partial_shuffle(&mut rng, size);
            let x = VertexSet::from_ids(probe.g.n(), picked.iter().copied());
            tested += 1;
            if let Some(y) = probe.test(&x) {
                return (Some((x, y)), tested);
            }
        }
    }
    (None, tested)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairVerdict {
    /// Zero-based indices into the sequence, `i < j`.
    pub i: usize,
    pub j: usize,
    pub verdict: FullnessVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceVerdict {
    pub pairs: Vec<PairVerdict>,
}

impl SequenceVerdict {
    pub fn all_certified(&self) -> bool {
        self.pairs.iter().all(|p| p.verdict.is_certified())
    }
}

/// Checks `(S_i, S_j)` for every `i < j` with `engine`.
pub fn check_sequence_fullness(
    g: &Graph,
    sets: &[VertexSet],
    params: &FullnessParams,
    engine: &FullnessEngine,
    seed: u64,
) -> Result<SequenceVerdict> {
    for (i, s) in sets.iter().enumerate() {
        for t in &sets[i + 1..] {
            require_disjoint(s, t)?;
        }
    }
    let mut pairs = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let pair_seed = seed ^ ((i as u64) << 32 | j as u64);
            let verdict = engine.check(g, &sets[i], &sets[j], params, pair_seed)?;
            pairs.push(PairVerdict { i, j, verdict });
        }
    }
    Ok(SequenceVerdict { pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    fn q(s: &str) -> RationalParam {
        s.parse().unwrap()
    }

    fn params(a: &str, b: &str, c: &str) -> FullnessParams {
        FullnessParams::new(q(a), q(b), q(c)).unwrap()
    }

    /// Bipartite graph with sides `0..na` and `na..na+nb`, edges given by
    /// `bits` (row-major over A x B, wrapping past 64 cells with the
    /// pattern flipped).
    fn bipartite(na: usize, nb: usize, bits: u64) -> (Graph, VertexSet, VertexSet) {
        let mut edges = Vec::new();
        for i in 0..na {
            for j in 0..nb {
                let k = i * nb + j;
                if (bits.rotate_right((k % 64) as u32) ^ (k / 64) as u64) & 1 == 1 {
                    edges.push((i, na + j));
                }
            }
        }
        let g = Graph::from_edge_list(na + nb, &edges).unwrap();
        let a = VertexSet::from_ids(g.n(), 0..na);
        let b = VertexSet::from_ids(g.n(), na..na + nb);
        (g, a, b)
    }

    /// Independent brute force: iterates subsets as sorted vectors and
    /// compares real-valued thresholds via cross-multiplied integers.
    fn brute_force_full(g: &Graph, a: &VertexSet, b: &VertexSet, p: &FullnessParams) -> bool {
        let a_list = a.to_vec();
        let (an, ad) = (p.alpha.num() as usize, p.alpha.den() as usize);
        let (bn, bd) = (p.beta.num() as usize, p.beta.den() as usize);
        let (gn, gd) = (p.gamma.num() as usize, p.gamma.den() as usize);
        for mask in 0usize..1 << a_list.len() {
            let x: Vec<usize> = (0..a_list.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| a_list[i])
                .collect();
            if x.len() * ad < an * a_list.len() {
                continue;
            }
            let bad = b
                .iter()
                .filter(|&v| {
                    let d = x.iter().filter(|&&w| g.has_edge(v, w)).count();
                    d * gd < gn * x.len()
                })
                .count();
            if bad * bd > bn * b.len() {
                return false;
            }
        }
        true
    }

    #[test]
    fn complete_bipartite_is_certified() {
        let g = complete_bipartite(4, 4);
        let a = set(&g, &[0, 1, 2, 3]);
        let b = set(&g, &[4, 5, 6, 7]);
        let p = params("1/4", "1/4", "1");
        assert!(check_fullness_exact(&g, &a, &b, &p, 20).unwrap().is_certified());
        let h = search_fullness_violation(&g, &a, &b, &p, &HeuristicConfig::default(), 1).unwrap();
        assert!(matches!(h, FullnessVerdict::Unknown(_)));
    }

    #[test]
    fn edgeless_pair_is_violated() {
        let (g, a, b) = bipartite(4, 4, 0);
        let p = params("1/2", "1/2", "1/2");
        match check_fullness_exact(&g, &a, &b, &p, 20).unwrap() {
            FullnessVerdict::Violated { x, y } => {
                assert_eq!(x.to_vec(), vec![0, 1]);
                assert_eq!(y, b);
            }
            other => panic!("expected violation, got {other:?}"),
        }
        let cfg = HeuristicConfig {
            strategies: vec![super::Strategy::NonNeighbors],
            ..Default::default()
        };
        match search_fullness_violation(&g, &a, &b, &p, &cfg, 0).unwrap() {
            FullnessVerdict::Violated { x, y } => {
                assert_eq!(x.to_vec(), vec![0, 1]);
                assert_eq!(y, b);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn empty_b_and_capacity() {
        let (g, a, _) = bipartite(3, 0, 0);
        let p = params("1/2", "1/2", "1/2");
        assert!(check_fullness_exact(&g, &a, &g.empty_set(), &p, 20).unwrap().is_certified());
        let big = Graph::from_edge_list(30, &[]).unwrap();
        let a = VertexSet::from_ids(30, 0..25);
        let b = VertexSet::from_ids(30, 25..30);
        assert!(matches!(
            check_fullness_exact(&big, &a, &b, &p, 20),
            Err(Error::Capacity { size: 25, cap: 20 })
        ));
    }

    #[test]
    fn sequences() {
        let g = Graph::from_edge_list(6, &[]).unwrap();
        let p = params("1/2", "1/2", "1/2");
        let single = check_sequence_fullness(&g, &[set(&g, &[0, 1])], &p, &FullnessEngine::exact(), 0).unwrap();
        assert!(single.all_certified());
        let sets = [set(&g, &[0, 1]), set(&g, &[2, 3]), set(&g, &[4, 5])];
        let v = check_sequence_fullness(&g, &sets, &p, &FullnessEngine::exact(), 0).unwrap();
        assert_eq!(v.pairs.len(), 3);
        assert!(v.pairs.iter().all(|p| p.verdict.is_violated()));

        // K_{2,2,2}
        let mut edges = Vec::new();
        for u in 0..6 {
            for w in u + 1..6 {
                if u / 2 != w / 2 {
                    edges.push((u, w));
                }
            }
        }
        let k222 = Graph::from_edge_list(6, &edges).unwrap();
        let v = check_sequence_fullness(&k222, &sets, &params("1/4", "1/4", "1"), &FullnessEngine::exact(), 0).unwrap();
        assert!(v.all_certified());
        assert!(check_sequence_fullness(&g, &[set(&g, &[0]), set(&g, &[0])], &p, &FullnessEngine::exact(), 0).is_err());
    }

    #[test]
    fn verdict_record_serializes() {
        let (g, a, b) = bipartite(2, 2, 0);
        let p = params("1/2", "1/2", "1/2");
        let v = check_fullness_exact(&g, &a, &b, &p, 20).unwrap();
        let json = serde_json::to_string(&v.record("exact", &p)).unwrap();
        assert_eq!(
            json,
            r#"{"engine":"exact","alpha":"1/2","beta":"1/2","gamma":"1/2","verdict":"violated","x":[0],"y":[2,3]}"#
        );
    }

    fn grid() -> Vec<FullnessParams> {
        let vals = ["1/4", "1/2", "3/4"];
        let mut out = Vec::new();
        for a in vals {
            for b in vals {
                for c in vals {
                    out.push(params(a, b, c));
                }
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exact_engine_matches_brute_force(na in 0usize..=10, nb in 0usize..=6, bits in any::<u64>()) {
            let (g, a, b) = bipartite(na, nb, bits);
            for p in grid() {
                let v = check_fullness_exact(&g, &a, &b, &p, 20).unwrap();
                prop_assert_eq!(v.is_certified(), brute_force_full(&g, &a, &b, &p));
            }
        }

        #[test]
        fn heuristic_violations_are_genuine(na in 1usize..=16, nb in 1usize..=8, bits in any::<u128>(), seed in any::<u64>()) {
            let (g, a, b) = bipartite(na, nb, bits as u64 ^ (bits >> 64) as u64);
            for p in grid() {
                let v = search_fullness_violation(&g, &a, &b, &p, &HeuristicConfig::default(), seed).unwrap();
                if let FullnessVerdict::Violated { x, y } = &v {
                    prop_assert!(verify_violation(&g, &a, &b, &p, x, y));
                    // the exact engine must agree that the pair is not full
                    prop_assert!(!check_fullness_exact(&g, &a, &b, &p, 20).unwrap().is_certified());
                }
            }
        }

        #[test]
        fn certification_is_monotone(na in 0usize..=8, nb in 0usize..=6, bits in any::<u64>()) {
            let (g, a, b) = bipartite(na, nb, bits);
            let all = grid();
            for p in &all {
                if !check_fullness_exact(&g, &a, &b, p, 20).unwrap().is_certified() {
                    continue;
                }
                for w in &all {
                    if w.alpha >= p.alpha && w.beta >= p.beta && w.gamma <= p.gamma {
                        prop_assert!(check_fullness_exact(&g, &a, &b, w, 20).unwrap().is_certified());
                    }
                }
            }
        }
    }
}
