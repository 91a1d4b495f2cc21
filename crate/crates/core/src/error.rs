use thiserror::Error;

use crate::graph::VertexId;

/// Errors raised by the partitioning machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-range input (edge lists, vertex ids, files).
    #[error("invalid input: {0}")]
    Input(String),

    /// A parameter lies outside the domain an operation accepts.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A caller-side precondition of an operation does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The exact fullness engine was asked to enumerate a set above its cap.
    #[error("capacity exceeded: |A| = {size} > cap {cap}; use the heuristic engine")]
    Capacity { size: usize, cap: usize },

    /// A greedy budget does not fit in machine integers.
    #[error("budget overflow: (1/alpha)^{exponent} with alpha = {alpha} does not fit in 128 bits")]
    BudgetOverflow { alpha: String, exponent: u64 },

    /// The input contains a clique the caller claimed was absent.
    #[error("graph is not K_{}-free; witness {witness:?}", .witness.len())]
    NotCliqueFree { witness: Vec<VertexId> },

    /// The spanning-clique descent found no qualifying vertex at some level.
    #[error("no vertex of set {level} is dense to every earlier set")]
    SpanningClique { level: usize },

    /// Rejection sampling exhausted its retry cap.
    #[error("split failed after {draws} draws (seed {seed})")]
    ProbabilisticFailure { seed: u64, draws: u32 },

    /// An internal invariant failed; indicates a bug or a violated input promise.
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
