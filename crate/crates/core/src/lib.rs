//! Certified partitions of `K_{r+1}`-free graphs into `ε`-sparse parts.
//!
//! A set `S` is `ε`-sparse when `G[S]` has maximum degree at most `ε|S|`.
//! [`partitioner::partition`] splits the vertex set of a clique-bounded graph
//! into such parts and returns a [`Certificate`] that
//! [`partitioner::verify_certificate`] re-checks from scratch. The building blocks
//! of the construction live in [`sparsity`], [`extraction`] and
//! [`refinement`], each usable on its own.
//!
//! Thresholds are exact fractions ([`RationalParam`]); bounds that involve
//! towers of exponents are compared in the log domain over a generic
//! [`scalar::Real`].

pub mod error;
pub mod extraction;
pub mod graph;
pub mod partitioner;
pub mod rational;
pub mod refinement;
pub mod scalar;
pub mod seed;
pub mod sparsity;

pub use error::{Error, Result};
pub use graph::{Graph, VertexId, VertexSet};
pub use partitioner::{
    partition, solve_constants, verify_certificate, Certificate, Mode, PartitionOutcome,
    PracticalConfig,
};
pub use rational::Rational;

/// Exact threshold parameter (`ε`, `α`, `β`, `γ`).
pub type RationalParam = Rational<u64>;

/// Constants of the main bound, evaluated in `f64`.
pub type Constants = partitioner::ConstantsOf<f64>;
