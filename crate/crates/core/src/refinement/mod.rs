//! Pair densification and balanced dense splitting.

mod chernoff;
mod pairs;
mod split;

pub use chernoff::{
    chernoff_tail, split_acceptance_floor, split_failure_bound, split_failure_bound_swapped,
    split_union_bound,
};
pub use pairs::{refine_pair, RefineOutcome, RefineTrace};
pub use split::{balanced_dense_split, SplitResult, DEFAULT_RETRY_CAP};
