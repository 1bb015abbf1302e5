//! Exhaustive sweep over every free tree on `n` vertices for the claim that
//! 2-reversible processes on trees with `n >= 5` have transients of at most
//! `n - 3`, attained by a predictable family of trees.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::checkpoint::Ledger;
use super::search::{max_transient_search, PropertyTally, TreeSearch};
use super::ExtremalError;
use crate::canon::{canonical_code, CanonicalCode};
use crate::dynamics::negate;
use crate::dynamics::Configuration;
use crate::enumerate::enumerate_free_trees;
use crate::graph::Graph;

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub k: u32,
    pub workers: usize,
    pub exhaustive_limit: usize,
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many newly searched trees (simulated interruption).
    pub stop_after: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            k: 2,
            workers: 1,
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            checkpoint: None,
            stop_after: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// A (tree, start) pair reaching the largest transient for its `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub tree_code: CanonicalCode,
    pub tree_edges: Vec<(usize, usize)>,
    pub config: Configuration,
    pub tau: usize,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub k: u32,
    pub trees_examined: usize,
    pub tau_max: usize,
    pub expected_tau_max: usize,
    pub tree_count: usize,
    pub expected_tree_count: usize,
    /// Every maximizing start, both polarities, ordered by tree code then
    /// configuration.
    pub extremal_records: Vec<ExtremalRecord>,
    pub configs_per_tree_raw: BTreeMap<CanonicalCode, usize>,
    pub configs_per_tree_mod_negation: BTreeMap<CanonicalCode, usize>,
    pub configs_per_tree_mod_automorphism: BTreeMap<CanonicalCode, usize>,
    pub configs_per_tree_mod_negation_and_automorphism: BTreeMap<CanonicalCode, usize>,
    /// Each extremal tree has exactly one maximizer up to negation.
    pub unique_mod_negation: bool,
    /// Each extremal tree has exactly one maximizer up to negation and
    /// tree automorphisms.
    pub unique_mod_negation_and_automorphism: bool,
    pub properties: PropertyTally,
    pub verdict: Verdict,
}

impl ConjectureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// Records as CSV: `tree_code,edges,config,tau,period`.
    pub fn records_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["tree_code", "edges", "config", "tau", "period"])
            .expect("in-memory csv");
        for r in &self.extremal_records {
            let edges = r
                .tree_edges
                .iter()
                .map(|(u, v)| format!("{u}-{v}"))
                .collect::<Vec<_>>()
                .join(" ");
            w.write_record([
                r.tree_code.to_hex(),
                edges,
                r.config.to_string(),
                r.tau.to_string(),
                r.period.to_string(),
            ])
            .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "n={} k={} verdict={} tau_max={} (expected {}) trees={} (expected {})",
            self.n,
            self.k,
            if self.verdict == Verdict::Pass { "pass" } else { "fail" },
            self.tau_max,
            self.expected_tau_max,
            self.tree_count,
            self.expected_tree_count
        );
        let _ = writeln!(
            s,
            "searched {} trees, {} trajectories, {} property violations",
            self.trees_examined,
            self.properties.trajectories,
            self.properties.violations()
        );
        for (code, raw) in &self.configs_per_tree_raw {
            let _ = writeln!(
                s,
                "  {code}: raw={raw} mod_negation={} mod_negation_and_automorphism={}",
                self.configs_per_tree_mod_negation[code],
                self.configs_per_tree_mod_negation_and_automorphism[code]
            );
        }
        s
    }
}

/// n/2 for even n, (n−1)/2 − 1 for odd n.
pub fn expected_tree_count(n: usize) -> usize {
    if n % 2 == 0 {
        n / 2
    } else {
        (n - 1) / 2 - 1
    }
}

fn search_sequential(
    pending: &[Graph],
    k: u32,
    limit: usize,
    ledger: Option<&Mutex<Ledger>>,
    budget: Option<usize>,
) -> Result<Vec<TreeSearch>, ExtremalError> {
    let mut out = Vec::with_capacity(pending.len());
    for tree in pending.iter().take(budget.unwrap_or(usize::MAX)) {
        let result = max_transient_search(tree, k, limit)?;
        if let Some(ledger) = ledger {
            ledger.lock().expect("ledger lock").append(&result)?;
        }
        out.push(result);
    }
    Ok(out)
}

#[cfg(feature = "parallel")]
fn search_parallel(
    pending: &[Graph],
    k: u32,
    limit: usize,
    workers: usize,
    ledger: Option<&Mutex<Ledger>>,
    budget: Option<usize>,
) -> Result<Vec<TreeSearch>, ExtremalError> {
    use rayon::prelude::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ExtremalError::Pool(e.to_string()))?;
    let started = AtomicUsize::new(0);
    let results: Vec<Option<Result<TreeSearch, ExtremalError>>> = pool.install(|| {
        pending
            .par_iter()
            .map(|tree| {
                if let Some(b) = budget {
                    if started.fetch_add(1, Ordering::SeqCst) >= b {
                        return None;
                    }
                }
                let result = max_transient_search(tree, k, limit).and_then(|r| {
                    if let Some(ledger) = ledger {
                        ledger.lock().expect("ledger lock").append(&r)?;
                    }
                    Ok(r)
                });
                Some(result)
            })
            .collect()
    });
    results.into_iter().flatten().collect()
}

/// Searches every tree in `trees`, sequentially when `workers <= 1` or when
/// the `parallel` feature is off. Output order follows `trees`.
pub fn search_trees(trees: &[Graph], k: u32, limit: usize, workers: usize) -> Result<Vec<TreeSearch>, ExtremalError> {
    run_pending(trees, k, limit, workers, None, None)
}

fn run_pending(
    pending: &[Graph],
    k: u32,
    limit: usize,
    workers: usize,
    ledger: Option<&Mutex<Ledger>>,
    budget: Option<usize>,
) -> Result<Vec<TreeSearch>, ExtremalError> {
    #[cfg(feature = "parallel")]
    if workers > 1 {
        return search_parallel(pending, k, limit, workers, ledger, budget);
    }
    let _ = workers;
    search_sequential(pending, k, limit, ledger, budget)
}

/// Exhaustive verification over every free tree on `n` vertices.
pub fn verify_conjecture(n: usize, opts: &SearchOptions) -> Result<ConjectureReport, ExtremalError> {
    if n < 5 {
        return Err(ExtremalError::TooSmall { n });
    }
    if n > opts.exhaustive_limit {
        return Err(ExtremalError::OverLimit { n, limit: opts.exhaustive_limit });
    }
    let trees: Vec<Graph> = enumerate_free_trees(n).collect();
    let total = trees.len();

    let (ledger, mut done) = match &opts.checkpoint {
        Some(path) => {
            let (ledger, done) = Ledger::open(path, n, opts.k)?;
            (Some(Mutex::new(ledger)), done)
        }
        None => (None, BTreeMap::new()),
    };
    let mut pending = Vec::new();
    for tree in trees {
        if !done.contains_key(&canonical_code(&tree)?) {
            pending.push(tree);
        }
    }
    let fresh = run_pending(
        &pending,
        opts.k,
        opts.exhaustive_limit,
        opts.workers,
        ledger.as_ref(),
        opts.stop_after,
    )?;
    let interrupted = fresh.len() < pending.len();
    for r in fresh {
        done.insert(r.tree_code.clone(), r);
    }
    if interrupted {
        return Err(ExtremalError::Interrupted { completed: done.len(), total });
    }
    if done.len() != total {
        return Err(ExtremalError::CorruptCheckpoint {
            line: 0,
            reason: format!("ledger holds {} trees unknown to the enumeration", done.len() - total),
        });
    }
    Ok(merge(n, opts.k, done.into_values()))
}

/// Folds per-tree results, in canonical-code order, into the final report.
pub fn merge(n: usize, k: u32, results: impl IntoIterator<Item = TreeSearch>) -> ConjectureReport {
    let results: Vec<TreeSearch> = results.into_iter().collect();
    let mut properties = PropertyTally::default();
    for r in &results {
        properties.merge(&r.tally);
    }
    let tau_max = results.iter().map(|r| r.tau_max).max().unwrap_or(0);
    let mut report = ConjectureReport {
        n,
        k,
        trees_examined: results.len(),
        tau_max,
        expected_tau_max: n.saturating_sub(3),
        tree_count: 0,
        expected_tree_count: expected_tree_count(n),
        extremal_records: Vec::new(),
        configs_per_tree_raw: BTreeMap::new(),
        configs_per_tree_mod_negation: BTreeMap::new(),
        configs_per_tree_mod_automorphism: BTreeMap::new(),
        configs_per_tree_mod_negation_and_automorphism: BTreeMap::new(),
        unique_mod_negation: true,
        unique_mod_negation_and_automorphism: true,
        properties,
        verdict: Verdict::Fail,
    };
    for r in results.iter().filter(|r| r.tau_max == tau_max) {
        let code = r.tree_code.clone();
        report.configs_per_tree_raw.insert(code.clone(), r.count_raw);
        report.configs_per_tree_mod_negation.insert(code.clone(), r.count_mod_negation);
        report.configs_per_tree_mod_automorphism.insert(code.clone(), r.count_mod_automorphism);
        report
            .configs_per_tree_mod_negation_and_automorphism
            .insert(code.clone(), r.count_mod_negation_and_automorphism);
        report.unique_mod_negation &= r.count_mod_negation == 1;
        report.unique_mod_negation_and_automorphism &= r.count_mod_negation_and_automorphism == 1;
        let mut records: Vec<ExtremalRecord> = r
            .extremal
            .iter()
            .flat_map(|e| [e.config.clone(), negate(&e.config)].map(|c| (c, e.period)))
            .map(|(config, period)| ExtremalRecord {
                tree_code: code.clone(),
                tree_edges: r.tree_edges.clone(),
                config,
                tau: r.tau_max,
                period,
            })
            .collect();
        records.sort_by(|a, b| a.config.to_string().cmp(&b.config.to_string()));
        report.extremal_records.extend(records);
    }
    report.tree_count = report.configs_per_tree_raw.len();
    report.verdict = if report.tau_max == report.expected_tau_max
        && report.tree_count == report.expected_tree_count
    {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    report
}
