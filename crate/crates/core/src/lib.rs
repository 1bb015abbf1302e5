//! k-reversible processes on graphs.
//!
//! Every vertex holds a state in {−1, +1}; at each synchronous step a vertex
//! flips iff at least `k` neighbors disagree with it. This crate provides the
//! dynamics with exact transient and period detection, the nondecreasing
//! energy function with its closed-form bounds, free-tree enumeration with
//! canonical codes, and exhaustive transient search over trees.
//!
//! With the default `parallel` feature, tree sweeps run on a rayon pool;
//! without it they run sequentially with identical output.

pub mod canon;
pub mod dynamics;
pub mod energy;
pub mod enumerate;
pub mod extremal;
pub mod graph;

pub use canon::{canonical_code, CanonicalCode};
pub use dynamics::{
    negate, op_counts, parse_config, run_trajectory, step, Configuration, OpCounts, TrajectoryResult,
};
pub use energy::{
    bound_report, delta_energy_breakdown, edge_partition, energy, energy_aux, max_tree_energy_check, partition,
    BoundReport, EnergyBreakdown,
};
pub use enumerate::{enumerate_free_trees, prufer_oracle_trees};
pub use graph::{parse_edge_list, Graph, GraphError};
