//! Exhaustive transient maximization on a single tree.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ExtremalError;
use crate::canon::{canonical_code, colored_code, CanonicalCode};
use crate::dynamics::{negate, Configuration, KernelRun, WordKernel};
use crate::graph::Graph;

/// Counts of trajectories that broke one of the proved properties. Every
/// field must stay zero; the sweep doubles as a mass property test.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyTally {
    pub trajectories: u64,
    /// Period outside {1, 2}.
    pub period_over_two: u64,
    /// τ > n(Δ+1) − 1.
    pub general_bound: u64,
    /// 2k > Δ and τ > n(k+1) − 1.
    pub high_k_bound: u64,
    /// Tree and τ > n(k+1) − 1.
    pub tree_bound: u64,
    /// τ > E(t_max) + n − 1.
    pub theorem2_bound: u64,
    /// Some step with E(t+1) < E(t).
    pub energy_decrease: u64,
    /// E changes on the periodic part.
    pub cycle_energy_change: u64,
    /// More than n consecutive transient steps with ΔE = 0.
    pub long_plateau: u64,
    /// Negated start reports a different (τ, p).
    pub negation_mismatch: u64,
    /// Tree with an energy above nk somewhere on the trajectory.
    pub tree_energy_cap: u64,
}

impl PropertyTally {
    pub fn violations(&self) -> u64 {
        self.period_over_two
            + self.general_bound
            + self.high_k_bound
            + self.tree_bound
            + self.theorem2_bound
            + self.energy_decrease
            + self.cycle_energy_change
            + self.long_plateau
            + self.negation_mismatch
            + self.tree_energy_cap
    }

    pub fn merge(&mut self, o: &PropertyTally) {
        self.trajectories += o.trajectories;
        self.period_over_two += o.period_over_two;
        self.general_bound += o.general_bound;
        self.high_k_bound += o.high_k_bound;
        self.tree_bound += o.tree_bound;
        self.theorem2_bound += o.theorem2_bound;
        self.energy_decrease += o.energy_decrease;
        self.cycle_energy_change += o.cycle_energy_change;
        self.long_plateau += o.long_plateau;
        self.negation_mismatch += o.negation_mismatch;
        self.tree_energy_cap += o.tree_energy_cap;
    }

    /// Checks one trajectory of a graph with `n` vertices and max degree
    /// `delta` against every bound.
    pub fn record(&mut self, run: &KernelRun, n: usize, delta: usize, k: u32, is_tree: bool) {
        let (n64, d64, k64) = (n as u64, delta as u64, u64::from(k));
        let tau = run.tau as u64;
        self.trajectories += 1;
        self.period_over_two += u64::from(!(1..=2).contains(&run.period));
        self.general_bound += u64::from(tau > n64 * (d64 + 1) - 1);
        self.high_k_bound += u64::from(2 * k64 > d64 && tau > n64 * (k64 + 1) - 1);
        self.tree_bound += u64::from(is_tree && tau > n64 * (k64 + 1) - 1);
        self.theorem2_bound += u64::from(tau > run.plateau_energy() + n64 - 1);
        let e = &run.energies;
        self.energy_decrease += u64::from(e.windows(2).any(|w| w[1] < w[0]));
        self.cycle_energy_change += u64::from(e[run.tau..].iter().any(|&x| x != e[run.tau]));
        self.tree_energy_cap += u64::from(is_tree && e.iter().any(|&x| x > n64 * k64));
        let mut longest = 0usize;
        let mut current = 0usize;
        for t in 0..run.tau {
            if e[t + 1] == e[t] {
                current += 1;
                longest = longest.max(current);
            } else {
                current = 0;
            }
        }
        self.long_plateau += u64::from(longest > n);
    }
}

/// One extremal start, stored with vertex 1 in state +1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtremalConfig {
    pub config: Configuration,
    pub period: usize,
}

/// Exhaustive result for one tree. This is also the checkpoint ledger line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSearch {
    pub n: usize,
    pub k: u32,
    pub tree_code: CanonicalCode,
    /// 1-based edges of the searched labeling.
    pub tree_edges: Vec<(usize, usize)>,
    pub tau_max: usize,
    /// Maximizers with vertex 1 fixed to +1, sorted.
    pub extremal: Vec<ExtremalConfig>,
    /// Maximizers over the full space (negations verified by simulation).
    pub count_raw: usize,
    pub count_mod_negation: usize,
    pub count_mod_automorphism: usize,
    pub count_mod_negation_and_automorphism: usize,
    pub tally: PropertyTally,
}

impl TreeSearch {
    pub fn tree(&self) -> Result<Graph, ExtremalError> {
        Ok(Graph::new(self.n, self.tree_edges.iter().map(|&(u, v)| (u - 1, v - 1)))?)
    }
}

/// Smallest colored code over `x` and its negation: the class of `x` under
/// tree automorphisms combined with global negation.
pub fn symmetry_class(tree: &Graph, x: &Configuration) -> Result<CanonicalCode, ExtremalError> {
    let a = colored_code(tree, &x.color_bytes())?;
    let b = colored_code(tree, &negate(x).color_bytes())?;
    Ok(a.min(b))
}

/// Simulates every configuration of `tree` with vertex 1 fixed to +1 and
/// returns the maximum transient with all configurations attaining it.
pub fn max_transient_search(tree: &Graph, k: u32, limit: usize) -> Result<TreeSearch, ExtremalError> {
    let n = tree.n();
    if n > limit || n > 63 {
        return Err(ExtremalError::OverLimit { n, limit: limit.min(63) });
    }
    if k == 0 {
        return Err(crate::dynamics::DynamicsError::ZeroThreshold.into());
    }
    let tree_code = canonical_code(tree)?;
    let kernel = WordKernel::new(tree)?;
    let delta = tree.max_degree();
    let max_steps = n * (delta + 1) + 3;

    let mut tally = PropertyTally::default();
    let mut tau_max = 0usize;
    let mut best: Vec<(u64, usize)> = Vec::new();
    let mut history = Vec::with_capacity(max_steps + 1);
    let mut run = KernelRun::default();
    for half in 0..(1u64 << (n - 1)) {
        let x = half << 1 | 1;
        kernel.run_into(x, k, max_steps, &mut history, &mut run)?;
        tally.record(&run, n, delta, k, true);
        if run.tau > tau_max {
            tau_max = run.tau;
            best.clear();
        }
        if run.tau == tau_max {
            best.push((x, run.period));
        }
    }

    let mut extremal = Vec::with_capacity(best.len());
    let mut orbit_both = BTreeSet::new();
    let mut orbit_aut = BTreeSet::new();
    for &(bits, period) in &best {
        let negated = !bits & kernel.full_mask();
        kernel.run_into(negated, k, max_steps, &mut history, &mut run)?;
        tally.record(&run, n, delta, k, true);
        tally.negation_mismatch += u64::from(run.tau != tau_max || run.period != period);

        let config = Configuration::from_bits(n, bits);
        let neg = Configuration::from_bits(n, negated);
        let a = colored_code(tree, &config.color_bytes())?;
        let b = colored_code(tree, &neg.color_bytes())?;
        orbit_both.insert(a.clone().min(b.clone()));
        orbit_aut.insert(a);
        orbit_aut.insert(b);
        extremal.push(ExtremalConfig { config, period });
    }
    extremal.sort();
    // raw count is the half-space count plus the negations that were just
    // re-simulated to the same transient
    let negations_confirmed = best.len() - tally.negation_mismatch as usize;
    Ok(TreeSearch {
        n,
        k,
        tree_code,
        tree_edges: tree.one_based_edges(),
        tau_max,
        count_raw: best.len() + negations_confirmed,
        count_mod_negation: best.len(),
        count_mod_automorphism: orbit_aut.len(),
        count_mod_negation_and_automorphism: orbit_both.len(),
        extremal,
        tally,
    })
}
