//! The main construction: partition a `K_{r+1}`-free graph into `ε`-sparse
//! parts.
//!
//! The run keeps a state `(A, S_1..S_k, R)`: finished parts `A`, a sequence of
//! large sets `S_i`, and a small remainder `R` dense to every `S_i`. While `R`
//! is above a threshold and `k < r`, an escalation step turns a `k`-state into
//! a `(k+1)`-state; once `R` is small, greedy extraction finishes it.
//!
//! Two modes. `Faithful` uses the exact thresholds of the bound, which are so
//! large that every desk-scale run finishes greedily straight away.
//! `Practical` swaps in configurable thresholds and exponents so escalation
//! actually runs; its output is checked just the same.

mod certificate;
mod constants;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use certificate::{
    verify_certificate, Certificate, Check, CheckRecord, CheckStatus, EscalationTrace, Rejection,
    TraceRecord, CERT_FORMAT,
};
pub use constants::{
    bound_margin_log2, recurrence_margin_log2, solve_constants, ConstantsOf, GridCheck, GRID,
    GRID_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::extraction::{
    effective_budget, extract_sparse_set, greedy_partition, leftover_bound, partition_most,
    LOG_TOLERANCE,
};
use crate::graph::{Graph, VertexId, VertexSet};
use crate::refinement::{balanced_dense_split, refine_pair, DEFAULT_RETRY_CAP};
use crate::scalar::{log2_add, log2_count, log_le, Tower};
use crate::seed::derive_seed;
use crate::sparsity::{
    check_sequence_fullness, is_dense_to, is_sparse_set, spanning_clique_descent, FullnessEngine,
    FullnessParams, HeuristicConfig, DEFAULT_EXACT_CAP,
};
use crate::{Constants, RationalParam};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Faithful,
    Practical,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Faithful => "faithful",
            Mode::Practical => "practical",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "faithful" => Ok(Mode::Faithful),
            "practical" => Ok(Mode::Practical),
            _ => Err(Error::Parameter(format!(
                "mode must be 'faithful' or 'practical', got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    Auto,
    Exact,
    Heuristic,
}

/// Surrogate thresholds and exponents for practical mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PracticalConfig {
    /// Escalate while `|R|` is at least this; default `10·⌈1/ε⌉·r`.
    pub escalation_threshold: Option<usize>,
    /// `Z_0` is extracted `ε^z0_exponent`-sparse.
    pub z0_exponent: u32,
    /// Pairs refinement uses `β = ε^beta_exponent`.
    pub beta_exponent: u32,
    /// Pairs refinement `l`.
    pub pairs_l: u32,
    /// `m` for the greedy pass on `R \ Y_{k+1}`.
    pub partition_m: u64,
    /// `m` for the finishing greedy pass.
    pub finish_m: u64,
    pub engine: EngineChoice,
    /// Largest `|A|` the exact fullness engine enumerates.
    pub exact_cap: usize,
    pub split_retry_cap: u32,
}

impl Default for PracticalConfig {
    fn default() -> Self {
        Self {
            escalation_threshold: None,
            z0_exponent: 2,
            beta_exponent: 1,
            pairs_l: 2,
            partition_m: 0,
            finish_m: 0,
            engine: EngineChoice::Auto,
            exact_cap: DEFAULT_EXACT_CAP,
            split_retry_cap: DEFAULT_RETRY_CAP,
        }
    }
}

impl PracticalConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("escalation_threshold", self.escalation_threshold.unwrap_or(1) as u64),
            ("z0_exponent", self.z0_exponent as u64),
            ("beta_exponent", self.beta_exponent as u64),
            ("pairs_l", self.pairs_l as u64),
            ("split_retry_cap", self.split_retry_cap as u64),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Parameter(format!("{name} must be positive")));
        }
        if self.exact_cap > 30 {
            return Err(Error::Parameter(format!(
                "exact_cap = {} above the limit 30",
                self.exact_cap
            )));
        }
        Ok(())
    }

    pub fn threshold(&self, eps: &RationalParam, r: usize) -> usize {
        self.escalation_threshold.unwrap_or_else(|| {
            let inv = eps.den().div_ceil(eps.num()) as usize;
            10 * inv * r
        })
    }

    pub fn fullness_engine(&self) -> FullnessEngine {
        match self.engine {
            EngineChoice::Exact => FullnessEngine::Exact {
                cap: self.exact_cap,
            },
            EngineChoice::Heuristic => FullnessEngine::Heuristic(HeuristicConfig::default()),
            EngineChoice::Auto => FullnessEngine::Auto {
                cap: self.exact_cap,
                heuristic: HeuristicConfig::default(),
            },
        }
    }
}

/// `(A, S_1..S_k, R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionState {
    pub finished: Vec<VertexSet>,
    pub s_sets: Vec<VertexSet>,
    pub leftover: VertexSet,
}

impl PartitionState {
    pub fn k(&self) -> usize {
        self.s_sets.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PartitionOutcome {
    Certified(Certificate),
    /// `r + 1` pairwise adjacent vertices.
    NotCliqueFree(Vec<VertexId>),
}

/// `log2` of the faithful escalation threshold `100(1/ε)^{r(1/ε)^{a_0}}`.
pub fn faithful_threshold_log2(eps: &RationalParam, r: usize, a0: u64) -> f64 {
    let inv = -eps.log2::<f64>();
    Tower::new(100f64.log2(), inv, (r as f64).log2() + a0 as f64 * inv).log2()
}

/// Partitions `V(G)` into `eps`-sparse parts.
///
/// A `K_{r+1}` met along the way is returned as
/// [`PartitionOutcome::NotCliqueFree`].
pub fn partition(
    g: &Graph,
    eps: &RationalParam,
    r: usize,
    mode: Mode,
    config: &PracticalConfig,
    seed: u64,
) -> Result<PartitionOutcome> {
    let run = || {
        let mut p = Partitioner::new(g, eps, r, mode, config.clone(), seed)?;
        while p.should_escalate() {
            if p.state.k() == r {
                p.find_clique_witness()?;
                break;
            }
            p.escalate()?;
        }
        p.finish()
    };
    match run() {
        Ok(cert) => Ok(PartitionOutcome::Certified(cert)),
        Err(Error::NotCliqueFree { witness }) => {
            if witness.len() != r + 1 || !g.is_clique(&witness) {
                return Err(Error::Invariant(format!(
                    "clique witness {witness:?} is not a K_{}",
                    r + 1
                )));
            }
            Ok(PartitionOutcome::NotCliqueFree(witness))
        }
        Err(e) => Err(e),
    }
}

enum Step {
    Advanced,
    FellBack,
}

/// One run of the construction, exposed step by step.
pub struct Partitioner<'g> {
    g: &'g Graph,
    eps: RationalParam,
    r: usize,
    mode: Mode,
    config: PracticalConfig,
    seed: u64,
    constants: Constants,
    state: PartitionState,
    traces: Vec<TraceRecord>,
    escalations: u64,
}

impl<'g> Partitioner<'g> {
    pub fn new(
        g: &'g Graph,
        eps: &RationalParam,
        r: usize,
        mode: Mode,
        config: PracticalConfig,
        seed: u64,
    ) -> Result<Self> {
        if eps.is_zero() || eps.count_lt(1, 2) {
            return Err(Error::Parameter(format!("eps = {eps} not in (0, 1/2]")));
        }
        if r < 2 {
            return Err(Error::Parameter(format!("r = {r}; need r >= 2")));
        }
        config.validate()?;
        Ok(Self {
            g,
            eps: *eps,
            r,
            mode,
            config,
            seed,
            constants: solve_constants(r)?,
            state: PartitionState {
                finished: Vec::new(),
                s_sets: Vec::new(),
                leftover: g.vertices(),
            },
            traces: Vec::new(),
            escalations: 0,
        })
    }

    pub fn state(&self) -> &PartitionState {
        &self.state
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    pub fn traces(&self) -> &[TraceRecord] {
        &self.traces
    }

    /// `log2` of the active escalation threshold.
    pub fn threshold_log2(&self) -> f64 {
        match self.mode {
            Mode::Faithful => faithful_threshold_log2(&self.eps, self.r, self.constants.a0()),
            Mode::Practical => log2_count(self.config.threshold(&self.eps, self.r)),
        }
    }

    /// `|R|` is at or above the active threshold.
    pub fn should_escalate(&self) -> bool {
        let len = self.state.leftover.len();
        match self.mode {
            Mode::Faithful => len > 0 && log2_count::<f64>(len) >= self.threshold_log2(),
            Mode::Practical => len > 0 && len >= self.config.threshold(&self.eps, self.r),
        }
    }

    fn eps_pow(&self, e: u32) -> Result<RationalParam> {
        self.eps.pow(e)
    }

    /// Adds `set` as a finished part, splitting it greedily first if it is
    /// not `ε`-sparse (practical mode only).
    fn settle(&self, set: VertexSet, out: &mut Vec<VertexSet>) -> Result<()> {
        if set.is_empty() {
            return Ok(());
        }
        if is_sparse_set(self.g, &set, &self.eps) {
            out.push(set);
            return Ok(());
        }
        if self.mode == Mode::Faithful {
            return Err(Error::Invariant(format!(
                "part of size {} starting at {:?} is not {}-sparse",
                set.len(),
                set.first(),
                self.eps
            )));
        }
        let split = greedy_partition(self.g, &set, &self.eps, self.r, set.len())?;
        if !split.leftover.is_empty() {
            return Err(Error::Invariant("greedy exhaustion left vertices over".into()));
        }
        out.extend(split.parts);
        Ok(())
    }

    /// Drops the current sequence and remainder into finished parts.
    fn fall_back(&mut self, reason: String) -> Result<()> {
        if self.mode == Mode::Faithful {
            return Err(Error::Invariant(reason));
        }
        self.traces.push(TraceRecord::Fallback {
            k: self.state.k(),
            reason,
        });
        let pending: Vec<VertexSet> = self
            .state
            .s_sets
            .drain(..)
            .chain(std::iter::once(std::mem::replace(
                &mut self.state.leftover,
                self.g.empty_set(),
            )))
            .collect();
        let mut out = Vec::new();
        for set in pending {
            self.settle(set, &mut out)?;
        }
        self.state.finished.extend(out);
        Ok(())
    }

    /// With `k = r`: looks for a `K_{r+1}` through a vertex of `R` and the
    /// sequence, returning it as [`Error::NotCliqueFree`].
    pub fn find_clique_witness(&mut self) -> Result<()> {
        let g = self.g;
        let sixth = self.eps.div_int(6)?;
        let v = self.state.leftover.iter().find(|&v| {
            self.state
                .s_sets
                .iter()
                .all(|s| sixth.count_ge(g.degree_in(v, s), s.len()))
        });
        let Some(v) = v else {
            self.traces.push(TraceRecord::Clique {
                found: false,
                level: None,
            });
            return Ok(());
        };
        let sets: Vec<VertexSet> = self
            .state
            .s_sets
            .iter()
            .map(|s| g.neighbors_in(v, s))
            .collect();
        match spanning_clique_descent(g, &sets, &self.eps_pow(5)?) {
            Ok(mut clique) => {
                clique.push(v);
                clique.sort_unstable();
                Err(Error::NotCliqueFree { witness: clique })
            }
            Err(Error::SpanningClique { level }) => {
                self.traces.push(TraceRecord::Clique {
                    found: false,
                    level: Some(level),
                });
                Ok(())
            }
            Err(e) => Err(e),
        }
    }

    /// Turns the current `k`-state into a `(k+1)`-state, or falls back to
    /// finishing greedily when a checked step fails in practical mode.
    pub fn escalate(&mut self) -> Result<()> {
        if self.mode == Mode::Faithful {
            return Err(Error::Parameter(format!(
                "faithful escalation needs |R| >= 2^{:.3e}; its exponents are not representable",
                self.threshold_log2()
            )));
        }
        if self.state.k() >= self.r {
            return Err(Error::Contract(format!("escalate needs k < r = {}", self.r)));
        }
        let step = self.escalations;
        self.escalations += 1;
        match self.try_escalate(step) {
            Ok(Step::Advanced) | Ok(Step::FellBack) => Ok(()),
            Err(e @ (Error::Contract(_)
            | Error::Invariant(_)
            | Error::ProbabilisticFailure { .. }
            | Error::SpanningClique { .. }
            | Error::Capacity { .. })) => self.fall_back(format!("escalation {step}: {e}")),
            Err(e) => Err(e),
        }
    }

    fn try_escalate(&mut self, step: u64) -> Result<Step> {
        let g = self.g;
        let eps = self.eps;
        let r = self.r;
        let k = self.state.k();
        let cfg = &self.config;
        let engine = cfg.fullness_engine();
        let n = g.n();
        let mut trace = EscalationTrace {
            k,
            ..EscalationTrace::default()
        };

        // 1. Z_0 sparse inside R
        let alpha_z = self.eps_pow(cfg.z0_exponent)?;
        let z0 = extract_sparse_set(g, &self.state.leftover, &alpha_z, r)?;
        trace.z0_size = z0.part.len();
        trace.z0_descent = z0.descent_trace;

        // 2. refine (S_i, Z_{i-1}) in turn
        let sixth = eps.div_int(6)?;
        let beta = self.eps_pow(cfg.beta_exponent)?;
        let mut z = z0.part;
        let mut xs = Vec::with_capacity(k);
        for (i, s) in self.state.s_sets.iter().enumerate() {
            let seed = derive_seed(self.seed, &[step, 2, i as u64]);
            let out = refine_pair(g, s, &z, &sixth, &beta, cfg.pairs_l, &engine, seed)?;
            trace.refinements.push(out.trace);
            xs.push(out.a_prime);
            z = out.b_prime;
        }

        // 3-4. Y_i from alternate ids of X_i; Y_{k+1} = Z_k
        let mut added = Vec::new();
        let mut ys = Vec::with_capacity(k + 1);
        for (s, x) in self.state.s_sets.iter().zip(&xs) {
            let y = VertexSet::from_ids(n, x.iter().step_by(2));
            self.settle(s.difference(&y), &mut added)?;
            ys.push(y);
        }
        ys.push(z);
        trace.y_sizes = ys.iter().map(VertexSet::len).collect();

        // 5. greedy pass on R \ Y_{k+1}
        let rest = self.state.leftover.difference(&ys[k]);
        let greedy = partition_most(g, &rest, &eps, r, cfg.partition_m)?;
        trace.greedy_parts = greedy.parts.len();
        for part in greedy.parts {
            self.settle(part, &mut added)?;
        }
        let r_prime = greedy.leftover;
        trace.r_prime = r_prime.len();

        // 6. B_i: what is left of R' that is (ε/3)-sparse to Y_i
        let third = eps.div_int(3)?;
        let mut r_tilde = r_prime.clone();
        let mut bs = Vec::with_capacity(k + 1);
        for y in &ys {
            let b = VertexSet::from_ids(
                n,
                r_tilde
                    .iter()
                    .filter(|&v| third.count_le(g.degree_in(v, y), y.len())),
            );
            r_tilde.difference_with(&b);
            bs.push(b);
        }
        trace.b_sizes = bs.iter().map(VertexSet::len).collect();
        trace.r_tilde = r_tilde.len();

        let three_hundredth = eps.div_int(300)?;
        let too_small = ys
            .iter()
            .position(|y| y.len() < 100 || !three_hundredth.count_le(r_prime.len(), y.len()));
        trace.checks.push(CheckRecord::checked(
            Check::SplitSizes,
            too_small.is_none(),
            format!("|Y_i| = {:?}, |R'| = {}", trace.y_sizes, r_prime.len()),
        ));
        if let Some(i) = too_small {
            let reason = format!(
                "split sizes fail for i = {}: |Y_i| = {}, |R'| = {}",
                i + 1,
                ys[i].len(),
                r_prime.len()
            );
            self.traces.push(TraceRecord::Escalation(trace));
            self.fall_back(reason)?;
            return Ok(Step::FellBack);
        }

        // 7. split each Y_i against R~
        let mut s_tilde = Vec::with_capacity(k + 1);
        for (i, (y, b)) in ys.iter().zip(bs).enumerate() {
            let seed = derive_seed(self.seed, &[step, 7, i as u64]);
            let split = balanced_dense_split(g, y, &r_tilde, &third, seed, cfg.split_retry_cap)?;
            trace.split_retries.push(split.retries);
            self.settle(split.t_prime.union(&b), &mut added)?;
            s_tilde.push(split.t);
        }

        // 8. commit the (k+1)-state
        self.state.finished.extend(added);
        self.state.s_sets = s_tilde;
        self.state.leftover = r_tilde;
        self.record_checks(&mut trace)?;
        let leftover_ok = trace
            .checks
            .iter()
            .all(|c| c.check != Check::LeftoverSize || c.status == CheckStatus::Passed);
        self.traces.push(TraceRecord::Escalation(trace));
        if !leftover_ok {
            self.fall_back("leftover size check fails".into())?;
            return Ok(Step::FellBack);
        }
        if let Err(e) = self.check_state() {
            self.fall_back(format!("state invariant after escalation {step}: {e}"))?;
            return Ok(Step::FellBack);
        }
        Ok(Step::Advanced)
    }

    /// The remaining checks on a freshly committed `(k+1)`-state.
    fn record_checks(&self, trace: &mut EscalationTrace) -> Result<()> {
        let g = self.g;
        let k1 = self.state.k();
        let r = self.r;
        let eps = self.eps;
        let parts = self.state.finished.len();
        trace.checks.push(CheckRecord::checked(
            Check::PartCount,
            self.part_bound_holds(parts, k1),
            format!("|A| = {parts}"),
        ));

        let fullness = if k1 < 2 {
            CheckRecord::checked(Check::SequenceFullness, true, "single set".into())
        } else if self.state.s_sets.iter().any(|s| s.len() > self.config.exact_cap) {
            CheckRecord::unverified(Check::SequenceFullness, "sets exceed the exact engine cap".into())
        } else {
            let e = (13 * r - 8 * k1 - 1) as u32;
            match (self.eps_pow(e), self.eps_pow(5)) {
                (Ok(t), Ok(gamma)) => {
                    let params = FullnessParams::new(t, t, gamma)?;
                    let engine = FullnessEngine::Exact {
                        cap: self.config.exact_cap,
                    };
                    let v = check_sequence_fullness(g, &self.state.s_sets, &params, &engine, 0)?;
                    CheckRecord::checked(Check::SequenceFullness, v.all_certified(), format!("eps^{e} threshold"))
                }
                _ => CheckRecord::unverified(Check::SequenceFullness, format!("eps^{e} not representable")),
            }
        };
        trace.checks.push(fullness);

        let e6 = (8 * (r - k1) + 1) as u32;
        let sparse6 = self
            .state
            .s_sets
            .iter()
            .all(|s| eps.count_le_pow(g.max_degree_in(s), s.len(), e6));
        trace.checks.push(CheckRecord::checked(Check::SequenceSparsity, sparse6, format!("eps^{e6}-sparse")));

        let hundredth = eps.div_int(100)?;
        let leftover = self.state.leftover.len();
        let leftover_small = self
            .state
            .s_sets
            .iter()
            .all(|s| hundredth.count_le(leftover, s.len()));
        trace.checks.push(CheckRecord::checked(
            Check::LeftoverSize,
            leftover_small,
            format!("|R~| = {leftover}"),
        ));
        Ok(())
    }

    /// `parts <= k(1/ε)^{a_0+2r} + k^2`, in the log domain.
    fn part_bound_holds(&self, parts: usize, k: usize) -> bool {
        let inv = -self.eps.log2::<f64>();
        let exp = (self.constants.a0() + 2 * self.r as u64) as f64;
        let bound = log2_add(log2_count::<f64>(k) + exp * inv, 2.0 * log2_count::<f64>(k));
        log_le(log2_count(parts), bound, LOG_TOLERANCE)
    }

    /// Checks the state invariants exactly.
    pub fn check_state(&self) -> Result<()> {
        let g = self.g;
        let st = &self.state;
        let k = st.k();
        if k > self.r {
            return Err(Error::Invariant(format!("k = {k} above r = {}", self.r)));
        }
        let mut seen = g.empty_set();
        let mut total = 0;
        for s in st.finished.iter().chain(&st.s_sets).chain([&st.leftover]) {
            seen.union_with(s);
            total += s.len();
        }
        if total != g.n() || seen.len() != g.n() {
            return Err(Error::Invariant("state sets do not partition V(G)".into()));
        }
        if !self.part_bound_holds(st.finished.len(), k) {
            return Err(Error::Invariant(format!(
                "{} finished parts exceed the bound for k = {k}",
                st.finished.len()
            )));
        }
        if let Some(i) = st
            .finished
            .iter()
            .position(|p| !is_sparse_set(g, p, &self.eps))
        {
            return Err(Error::Invariant(format!("finished part {i} is not eps-sparse")));
        }
        if self.mode == Mode::Faithful {
            let e = (8 * (self.r - k) + 1) as u32;
            if let Some(i) = st
                .s_sets
                .iter()
                .position(|s| !self.eps.count_le_pow(g.max_degree_in(s), s.len(), e))
            {
                return Err(Error::Invariant(format!("S_{} is not eps^{e}-sparse", i + 1)));
            }
        }
        let hundredth = self.eps.div_int(100)?;
        let sixth = self.eps.div_int(6)?;
        for (i, s) in st.s_sets.iter().enumerate() {
            if !hundredth.count_le(st.leftover.len(), s.len()) {
                return Err(Error::Invariant(format!(
                    "|R| = {} above (eps/100)|S_{}|",
                    st.leftover.len(),
                    i + 1
                )));
            }
            if !is_dense_to(g, &st.leftover, s, &sixth)? {
                return Err(Error::Invariant(format!("R is not (eps/6)-dense to S_{}", i + 1)));
            }
        }
        Ok(())
    }

    /// Finishes the remainder greedily and the sequence as parts, then
    /// builds and self-checks the certificate.
    pub fn finish(mut self) -> Result<Certificate> {
        let g = self.g;
        let eps = self.eps;
        let r = self.r;
        let k = self.state.k();
        let rest = std::mem::replace(&mut self.state.leftover, g.empty_set());
        let leftover_in = rest.len();
        let mut out = Vec::new();
        for s in std::mem::take(&mut self.state.s_sets) {
            self.settle(s, &mut out)?;
        }
        let mut descents = 0;
        match self.mode {
            Mode::Faithful => {
                let m = self.constants.a0() + 2;
                let budget = effective_budget(&eps, m + 2 * r as u64 - 1, rest.len());
                let done = greedy_partition(g, &rest, &eps, r, budget)?;
                let bound = leftover_bound::<f64>(&eps, r, m, rest.len());
                if !done.leftover.is_empty() || !bound.bounds(done.leftover.len(), LOG_TOLERANCE) {
                    return Err(Error::Invariant(format!(
                        "finishing pass left {} vertices",
                        done.leftover.len()
                    )));
                }
                descents += done.descents;
                out.extend(done.parts);
            }
            Mode::Practical => {
                let mut pending = rest;
                match partition_most(g, &pending, &eps, r, self.config.finish_m) {
                    Ok(done) => {
                        descents += done.descents;
                        out.extend(done.parts);
                        pending = done.leftover;
                    }
                    Err(Error::BudgetOverflow { .. }) => {}
                    Err(e) => return Err(e),
                }
                let done = greedy_partition(g, &pending, &eps, r, pending.len())?;
                descents += done.descents;
                out.extend(done.parts);
            }
        }
        self.traces.push(TraceRecord::Finish {
            k,
            leftover: leftover_in,
            parts: out.len(),
            descents,
        });
        self.state.finished.extend(out);
        self.build_certificate()
    }

    fn build_certificate(self) -> Result<Certificate> {
        let g = self.g;
        let mut parts: Vec<&VertexSet> = self.state.finished.iter().filter(|p| !p.is_empty()).collect();
        parts.sort_by_key(|p| p.first());
        let mut covered = g.empty_set();
        for p in &parts {
            if !covered.is_disjoint(p) {
                return Err(Error::Invariant("parts overlap".into()));
            }
            covered.union_with(p);
            if !is_sparse_set(g, p, &self.eps) {
                return Err(Error::Invariant(format!(
                    "part starting at {:?} is not eps-sparse",
                    p.first()
                )));
            }
        }
        if covered.len() != g.n() {
            return Err(Error::Invariant(format!(
                "parts cover {} of {} vertices",
                covered.len(),
                g.n()
            )));
        }
        let cert = Certificate {
            format: CERT_FORMAT.to_string(),
            epsilon: self.eps,
            r: self.r,
            mode: self.mode,
            seed: self.seed,
            per_part_max_degree: parts.iter().map(|p| g.max_degree_in(p)).collect(),
            part_count: parts.len(),
            parts: parts.iter().map(|p| p.to_vec()).collect(),
            bound_value_log2: self.constants.c_r as f64 * -self.eps.log2::<f64>(),
            traces: self.traces,
        };
        verify_certificate(g, &cert).map_err(|e| Error::Invariant(e.to_string()))?;
        Ok(cert)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn q(s: &str) -> RationalParam {
        s.parse().unwrap()
    }

    fn run(g: &Graph, eps: &str, r: usize, mode: Mode, seed: u64) -> PartitionOutcome {
        partition(g, &q(eps), r, mode, &PracticalConfig::default(), seed).unwrap()
    }

    fn certified(o: PartitionOutcome) -> Certificate {
        match o {
            PartitionOutcome::Certified(c) => c,
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn edgeless_is_one_part() {
        let g = Graph::from_edge_list(9, &[]).unwrap();
        for mode in [Mode::Faithful, Mode::Practical] {
            let c = certified(run(&g, "1/4", 2, mode, 0));
            assert_eq!(c.part_count, 1);
            assert_eq!(c.parts[0], (0..9).collect::<Vec<_>>());
        }
    }

    #[test]
    fn petersen_three_tenths_is_one_part() {
        let g = petersen();
        let c = certified(run(&g, "3/10", 2, Mode::Faithful, 1));
        assert_eq!(c.part_count, 1);
        assert_eq!(c.per_part_max_degree, vec![3]);
        assert!(verify_certificate(&g, &c).is_ok());
    }

    #[test]
    fn k4_with_r2_gives_triangle() {
        let g = complete(4);
        match run(&g, "1/4", 2, Mode::Faithful, 0) {
            PartitionOutcome::NotCliqueFree(w) => {
                assert_eq!(w.len(), 3);
                assert!(g.is_clique(&w));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn eps_above_half_rejected() {
        let g = petersen();
        let err = partition(&g, &q("3/5"), 2, Mode::Practical, &PracticalConfig::default(), 0);
        assert!(matches!(err, Err(Error::Parameter(_))));
        let err = partition(&g, &q("1/4"), 1, Mode::Practical, &PracticalConfig::default(), 0);
        assert!(matches!(err, Err(Error::Parameter(_))));
    }

    #[test]
    fn faithful_never_escalates_at_desk_scale() {
        let g = Graph::from_edge_list(100_000, &[]).unwrap();
        for eps in ["1/2", "1/4", "1/10", "1/20"] {
            for r in 2..=4 {
                let p = Partitioner::new(&g, &q(eps), r, Mode::Faithful, PracticalConfig::default(), 0)
                    .unwrap();
                assert!(p.threshold_log2() > 1e50);
                assert!(!p.should_escalate());
            }
        }
    }

    #[test]
    fn faithful_finish_leaves_nothing() {
        // a synthetic state: one finished part, the rest as R
        let g = cycle(12);
        let mut p = Partitioner::new(&g, &q("1/4"), 2, Mode::Faithful, PracticalConfig::default(), 0)
            .unwrap();
        p.state.finished.push(set(&g, &[0, 6]));
        p.state.leftover = g.vertices().difference(&set(&g, &[0, 6]));
        assert!(!p.should_escalate());
        let cert = p.finish().unwrap();
        assert_eq!(cert.parts.iter().map(Vec::len).sum::<usize>(), 12);
        assert!(verify_certificate(&g, &cert).is_ok());
    }

    #[test]
    fn practical_escalation_on_a_bipartite_graph() {
        // K_{150,150} minus a perfect matching, threshold 60
        let mut edges = Vec::new();
        for u in 0..150 {
            for v in 0..150 {
                if u != v {
                    edges.push((u, 150 + v));
                }
            }
        }
        let g = Graph::from_edge_list(300, &edges).unwrap();
        let config = PracticalConfig {
            escalation_threshold: Some(60),
            ..PracticalConfig::default()
        };
        let mut p = Partitioner::new(&g, &q("1/2"), 2, Mode::Practical, config.clone(), 5).unwrap();
        assert!(p.should_escalate());
        p.escalate().unwrap();
        assert!(matches!(p.traces()[0], TraceRecord::Escalation(_)));
        p.check_state().unwrap();
        let cert = p.finish().unwrap();
        assert!(verify_certificate(&g, &cert).is_ok());
        let again = certified(partition(&g, &q("1/2"), 2, Mode::Practical, &config, 5).unwrap());
        assert_eq!(cert, again);
    }

    #[test]
    fn config_validation() {
        let bad = PracticalConfig {
            pairs_l: 0,
            ..PracticalConfig::default()
        };
        assert!(bad.validate().is_err());
        assert_eq!(PracticalConfig::default().threshold(&q("1/10"), 2), 200);
        assert_eq!(PracticalConfig::default().threshold(&q("2/7"), 3), 120);
        assert_eq!("practical".parse::<Mode>().unwrap(), Mode::Practical);
        assert!("fast".parse::<Mode>().is_err());
    }
}
