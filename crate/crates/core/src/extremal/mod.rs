//! Exhaustive transient maximization over trees.

pub mod algorithm1;
pub mod checkpoint;
pub mod conjecture;
pub mod search;

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::graph::GraphError;

pub use algorithm1::{algorithm1_generate, cross_validate_against, cross_validate_algorithm1, Alg1Validation};
pub use conjecture::{
    expected_tree_count, search_trees, verify_conjecture, ConjectureReport, ExtremalRecord, SearchOptions, Verdict,
};
pub use search::{max_transient_search, PropertyTally, TreeSearch};

#[derive(Debug, Error)]
pub enum ExtremalError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("n = {n} is below 5, where the transient claim starts")]
    TooSmall { n: usize },
    #[error("n = {n} exceeds the exhaustive limit {limit}")]
    OverLimit { n: usize, limit: usize },
    #[error("checkpoint line {line}: {reason}")]
    CorruptCheckpoint { line: usize, reason: String },
    #[error("checkpoint is for (n, k) = {found:?}, this run is {expected:?}")]
    CheckpointMismatch { expected: (usize, u32), found: (usize, u32) },
    #[error("stopped after {completed} of {total} trees")]
    Interrupted { completed: usize, total: usize },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
