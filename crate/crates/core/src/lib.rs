//! Training-free fusion of redundant visual tokens.
//!
//! The crate reduces an ordered sequence of embedding rows (the visual
//! tokens an encoder hands to a language model) to a shorter sequence. The
//! main strategy, [`fuse`], walks the input once and folds each token into
//! its most similar output token whenever their cosine similarity exceeds a
//! threshold, keeping a running weighted mean. Comparison strategies
//! (random sampling, score-based top-k pruning, uniform stride sampling) and
//! a quadratic global-greedy reference ([`oracle_fuse`]) share the same
//! output type so [`metrics`] can score all of them on one axis.
//!
//! Everything here is `no_std` + `alloc`. File formats, reports and the
//! command-line driver live in the `tokfuse` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod baselines;
pub mod config;
mod error;
pub mod gen;
pub mod metrics;
pub mod oracle;
pub mod rng;
pub mod sequence;
pub mod tofu;

pub use baselines::{random_sample, topk_prune, uniform_stride, ImportanceScores};
pub use config::{reduce, Reduction, ReductionConfig, Strategy};
pub use error::{Error, Result};
pub use gen::{generate_clusters, ClusterSpec};
pub use metrics::{attention_savings, reconstruction_error, ReconstructionError};
pub use oracle::{oracle_fuse, oracle_fuse_counted};
pub use sequence::{cosine_similarity, validate_sequence, TokenSequence, MIN_NORM};
pub use tofu::{
    dynamic_threshold, fuse, fuse_auto, fuse_counted, ReducedSequence, ThresholdSchedule,
};
