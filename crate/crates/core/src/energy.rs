//! The energy function of k-reversible processes and its bounds.
//!
//! With `S1 = {i : op_i >= k}` and `S2` its complement,
//!
//! ```text
//! E(t)  = Σ_{S1(t)} (op_i(t)   − k) + Σ_{S2(t)} (k − op_i(t))
//! E'(t) = Σ_{S1(t)} (op_i(t+1) − k) + Σ_{S2(t)} (k − op_i(t+1))
//! ```
//!
//! `E = E'` always, and `E` never decreases along a trajectory. Everything
//! here is exact integer arithmetic.

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::dynamics::{
    op_counts_unchecked, step_unchecked, Configuration, DynamicsError, OpCounts, TrajectoryResult,
};
use crate::graph::{Graph, GraphError};

/// Brute-force maximization visits 2^n configurations.
pub const MAX_BRUTE_FORCE_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnergyError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("energy identity violated: {0}")]
    IdentityViolated(String),
}

fn check(g: &Graph, x: &Configuration, k: u32) -> Result<(), DynamicsError> {
    if k == 0 {
        return Err(DynamicsError::ZeroThreshold);
    }
    if g.n() != x.len() {
        return Err(DynamicsError::WrongLength { expected: g.n(), got: x.len() });
    }
    Ok(())
}

fn one_based<S: Serializer>(vertices: &[usize], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(vertices.iter().map(|v| v + 1))
}

/// `(S1, S2)` as sorted 0-based vertex lists.
pub fn partition(g: &Graph, x: &Configuration, k: u32) -> Result<(Vec<usize>, Vec<usize>), EnergyError> {
    check(g, x, k)?;
    let ops = op_counts_unchecked(g, x);
    Ok(split_by_threshold(&ops, k))
}

fn split_by_threshold(ops: &OpCounts, k: u32) -> (Vec<usize>, Vec<usize>) {
    (0..ops.0.len()).partition(|&v| ops.get(v) >= k)
}

fn signed_sum(ops_partition: &OpCounts, ops_value: &OpCounts, k: u32) -> i64 {
    let k = i64::from(k);
    ops_partition
        .0
        .iter()
        .zip(&ops_value.0)
        .map(|(&at_t, &value)| {
            let value = i64::from(value);
            if i64::from(at_t) >= k {
                value - k
            } else {
                k - value
            }
        })
        .sum()
}

fn non_negative(value: i64, what: &str) -> Result<u64, EnergyError> {
    u64::try_from(value).map_err(|_| EnergyError::IdentityViolated(format!("{what} = {value} < 0")))
}

/// E(t).
pub fn energy(g: &Graph, x: &Configuration, k: u32) -> Result<u64, EnergyError> {
    check(g, x, k)?;
    let ops = op_counts_unchecked(g, x);
    non_negative(signed_sum(&ops, &ops, k), "E")
}

/// E'(t): partition taken at `t`, op counts taken at `t + 1`.
pub fn energy_aux(g: &Graph, x: &Configuration, k: u32) -> Result<u64, EnergyError> {
    check(g, x, k)?;
    let ops = op_counts_unchecked(g, x);
    let next = op_counts_unchecked(g, &step_unchecked(g, x, k));
    non_negative(signed_sum(&ops, &next, k), "E'")
}

/// Sizes of the discordant-edge classes: inside S1 (`a`), inside S2 (`b`),
/// and across (`c`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgePartition {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

fn edge_partition_of(g: &Graph, x: &Configuration, ops: &OpCounts, k: u32) -> Result<EdgePartition, EnergyError> {
    let mut p = EdgePartition { a: 0, b: 0, c: 0 };
    for &(u, v) in g.edges() {
        if x.is_positive(u) == x.is_positive(v) {
            continue;
        }
        match (ops.get(u) >= k, ops.get(v) >= k) {
            (true, true) => p.a += 1,
            (false, false) => p.b += 1,
            _ => p.c += 1,
        }
    }
    let (s1, s2) = split_by_threshold(ops, k);
    let sum = |set: &[usize]| set.iter().map(|&v| ops.get(v) as usize).sum::<usize>();
    let (sum1, sum2) = (sum(&s1), sum(&s2));
    if sum1 != 2 * p.a + p.c || sum2 != 2 * p.b + p.c {
        return Err(EnergyError::IdentityViolated(format!(
            "Σ_S1 op = {sum1}, Σ_S2 op = {sum2}, |A| = {}, |B| = {}, |C| = {}",
            p.a, p.b, p.c
        )));
    }
    Ok(p)
}

/// Discordant-edge partition with its two counting identities checked.
pub fn edge_partition(g: &Graph, x: &Configuration, k: u32) -> Result<EdgePartition, EnergyError> {
    check(g, x, k)?;
    let ops = op_counts_unchecked(g, x);
    edge_partition_of(g, x, &ops, k)
}

/// Everything about one step `t -> t+1` that the energy argument uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnergyBreakdown {
    pub k: u32,
    pub op_now: OpCounts,
    pub op_next: OpCounts,
    #[serde(serialize_with = "one_based")]
    pub s1: Vec<usize>,
    #[serde(serialize_with = "one_based")]
    pub s2: Vec<usize>,
    pub energy: u64,
    pub energy_aux: u64,
    pub energy_next: u64,
    pub a_size: usize,
    pub b_size: usize,
    pub c_size: usize,
    /// Contribution of each vertex to E(t+1) − E(t).
    pub per_vertex_delta: Vec<i64>,
}

impl EnergyBreakdown {
    pub fn delta(&self) -> i64 {
        self.energy_next as i64 - self.energy as i64
    }
}

/// Per-vertex accounting of ΔE. A vertex staying in S1 or in S2 contributes
/// nothing; moving S1→S2 contributes `2(k − op_i(t+1))`; moving S2→S1
/// contributes `2(op_i(t+1) − k)`.
pub fn delta_energy_breakdown(g: &Graph, x: &Configuration, k: u32) -> Result<EnergyBreakdown, EnergyError> {
    check(g, x, k)?;
    let op_now = op_counts_unchecked(g, x);
    let op_next = op_counts_unchecked(g, &step_unchecked(g, x, k));
    let edges = edge_partition_of(g, x, &op_now, k)?;
    let (s1, s2) = split_by_threshold(&op_now, k);
    let energy = non_negative(signed_sum(&op_now, &op_now, k), "E(t)")?;
    let energy_aux = non_negative(signed_sum(&op_now, &op_next, k), "E'(t)")?;
    let energy_next = non_negative(signed_sum(&op_next, &op_next, k), "E(t+1)")?;
    let ki = i64::from(k);
    let per_vertex_delta: Vec<i64> = (0..g.n())
        .map(|v| {
            let next = i64::from(op_next.get(v));
            match (op_now.get(v) >= k, op_next.get(v) >= k) {
                (true, true) | (false, false) => 0,
                (true, false) => 2 * (ki - next),
                (false, true) => 2 * (next - ki),
            }
        })
        .collect();

    if energy != energy_aux {
        return Err(EnergyError::IdentityViolated(format!("E = {energy} but E' = {energy_aux}")));
    }
    let total: i64 = per_vertex_delta.iter().sum();
    if total != energy_next as i64 - energy as i64 {
        return Err(EnergyError::IdentityViolated(format!(
            "per-vertex deltas sum to {total}, E(t+1) − E(t) = {}",
            energy_next as i64 - energy as i64
        )));
    }
    if let Some(v) = per_vertex_delta.iter().position(|&d| d < 0) {
        return Err(EnergyError::IdentityViolated(format!("vertex {} contributes negatively", v + 1)));
    }
    Ok(EnergyBreakdown {
        k,
        op_now,
        op_next,
        s1,
        s2,
        energy,
        energy_aux,
        energy_next,
        a_size: edges.a,
        b_size: edges.b,
        c_size: edges.c,
        per_vertex_delta,
    })
}

/// Closed-form transient and energy bounds for a graph and threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: u32,
    pub max_degree: usize,
    /// n(Δ+1) − 1, valid for every k.
    pub general_bound: u64,
    /// n(k+1) − 1, present iff 2k > Δ.
    pub high_k_bound: Option<u64>,
    /// n(k+1) − 1, present iff the graph is a tree.
    pub tree_bound: Option<u64>,
    /// nk, present iff the graph is a tree.
    pub tree_max_energy: Option<u64>,
    /// E(t_max) + n − 1, present iff a trajectory was supplied.
    pub theorem2_bound: Option<u64>,
}

impl BoundReport {
    /// Tightest transient bound that applies.
    pub fn best_tau_bound(&self) -> u64 {
        [Some(self.general_bound), self.high_k_bound, self.tree_bound, self.theorem2_bound]
            .into_iter()
            .flatten()
            .min()
            .expect("general bound always present")
    }
}

pub fn bound_report(g: &Graph, k: u32, traj: Option<&TrajectoryResult>) -> Result<BoundReport, EnergyError> {
    if k == 0 {
        return Err(DynamicsError::ZeroThreshold.into());
    }
    let n = g.n() as u64;
    let delta = g.max_degree() as u64;
    let kk = u64::from(k);
    let tree = g.is_tree();
    Ok(BoundReport {
        n: g.n(),
        k,
        max_degree: g.max_degree(),
        general_bound: n * (delta + 1) - 1,
        high_k_bound: (2 * kk > delta).then(|| n * (kk + 1) - 1),
        tree_bound: tree.then(|| n * (kk + 1) - 1),
        tree_max_energy: tree.then_some(n * kk),
        theorem2_bound: traj.map(|t| t.plateau_energy + n - 1),
    })
}

/// Result of maximizing E over every configuration of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeEnergyMax {
    pub max_energy: u64,
    pub argmax: Vec<Configuration>,
}

/// Brute force over all 2^n configurations of a tree.
pub fn max_tree_energy_check(tree: &Graph, k: u32) -> Result<TreeEnergyMax, EnergyError> {
    if k == 0 {
        return Err(DynamicsError::ZeroThreshold.into());
    }
    if !tree.is_tree() {
        return Err(GraphError::NotATree.into());
    }
    let n = tree.n();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(GraphError::TooLarge { n, limit: MAX_BRUTE_FORCE_VERTICES }.into());
    }
    let mut best = TreeEnergyMax { max_energy: 0, argmax: Vec::new() };
    for bits in 0..(1u64 << n) {
        let x = Configuration::from_bits(n, bits);
        let e = energy(tree, &x, k)?;
        if e > best.max_energy || best.argmax.is_empty() {
            best.max_energy = e;
            best.argmax.clear();
        }
        if e == best.max_energy {
            best.argmax.push(x);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{default_max_steps, parse_config, run_trajectory};
    use crate::graph::named::{path, star};
    use crate::graph::parse_edge_list;

    fn cfg(s: &str) -> Configuration {
        parse_config(s, s.len()).unwrap()
    }

    #[test]
    fn partition_examples() {
        let g = path(3);
        assert_eq!(partition(&g, &cfg("+++"), 1).unwrap(), (vec![], vec![0, 1, 2]));
        assert_eq!(partition(&g, &cfg("+-+"), 1).unwrap(), (vec![0, 1, 2], vec![]));
        assert_eq!(partition(&g, &cfg("+-+"), 2).unwrap(), (vec![1], vec![0, 2]));
    }

    #[test]
    fn energy_examples() {
        let g = path(3);
        assert_eq!(energy(&g, &cfg("---"), 2).unwrap(), 6);
        assert_eq!(energy(&g, &cfg("+-+"), 1).unwrap(), 1);
        assert_eq!(energy(&g, &cfg("+-+"), 2).unwrap(), 2);
        assert_eq!(energy_aux(&g, &cfg("---"), 2).unwrap(), 6);
        assert_eq!(energy_aux(&g, &cfg("+-+"), 1).unwrap(), 1);
        assert_eq!(energy_aux(&g, &cfg("+-+"), 2).unwrap(), 2);
        assert!(energy(&g, &cfg("+-+"), 0).is_err());
    }

    #[test]
    fn edge_partition_examples() {
        let g = path(3);
        assert_eq!(edge_partition(&g, &cfg("+++"), 1).unwrap(), EdgePartition { a: 0, b: 0, c: 0 });
        assert_eq!(edge_partition(&g, &cfg("+-+"), 1).unwrap(), EdgePartition { a: 2, b: 0, c: 0 });
        assert_eq!(edge_partition(&g, &cfg("+-+"), 2).unwrap(), EdgePartition { a: 0, b: 0, c: 2 });
    }

    #[test]
    fn breakdown_examples() {
        let g = path(3);
        let fixed = delta_energy_breakdown(&g, &cfg("+++"), 2).unwrap();
        assert_eq!(fixed.per_vertex_delta, vec![0, 0, 0]);

        let b = delta_energy_breakdown(&g, &cfg("+-+"), 2).unwrap();
        assert_eq!((b.energy, b.energy_next), (2, 6));
        assert_eq!(b.per_vertex_delta, vec![0, 4, 0]);
        assert_eq!(b.delta(), 4);
        let json = serde_json::to_value(&b).unwrap();
        assert_eq!(json["s1"], serde_json::json!([2]));
        assert_eq!(json["s2"], serde_json::json!([1, 3]));
    }

    #[test]
    fn bound_examples() {
        let fig1 = parse_edge_list("n=8\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n6 8").unwrap();
        let r = bound_report(&fig1, 2, None).unwrap();
        assert_eq!(r.general_bound, 31);
        assert_eq!(r.high_k_bound, Some(23));
        assert_eq!(r.tree_max_energy, Some(16));
        assert_eq!(r.tree_bound, Some(23));
        assert_eq!(r.theorem2_bound, None);

        let g = path(3);
        let traj = run_trajectory(&g, &cfg("+-+"), 1, default_max_steps(&g)).unwrap();
        let r = bound_report(&g, 1, Some(&traj)).unwrap();
        assert_eq!(r.theorem2_bound, Some(3));
        assert!(traj.tau as u64 <= 3);

        // 2k = 2 is not > Δ = 4
        let r = bound_report(&star(4), 1, None).unwrap();
        assert_eq!(r.high_k_bound, None);
        let r = bound_report(&crate::graph::named::cycle(4), 1, None).unwrap();
        assert_eq!((r.tree_bound, r.tree_max_energy), (None, None));
    }

    #[test]
    fn tree_max_energy_examples() {
        let r = max_tree_energy_check(&path(3), 1).unwrap();
        assert_eq!(r.max_energy, 3);
        assert_eq!(r.argmax, vec![cfg("---"), cfg("+++")]);
        assert_eq!(max_tree_energy_check(&path(7), 2).unwrap().max_energy, 14);
        assert_eq!(max_tree_energy_check(&star(4), 1).unwrap().max_energy, 5);
        assert!(max_tree_energy_check(&crate::graph::named::cycle(3), 1).is_err());
    }
}
