//! The synchronous k-reversible update rule and exact transient/period
//! detection.
//!
//! A vertex flips its ±1 state iff at least `k` of its neighbors currently
//! disagree with it. Configurations are packed bit vectors (bit set ⇔ state
//! +1), so a vertex's discordant-neighbor count is a popcount of its
//! neighborhood mask against the configuration (complemented when the vertex
//! itself is +1).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{words_for, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("configuration has length {got}, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("illegal character {ch:?} at position {position}")]
    IllegalCharacter { position: usize, ch: char },
    #[error("state {value} at position {position} is not -1 or +1")]
    IllegalState { position: usize, value: i8 },
    #[error("threshold k must be at least 1")]
    ZeroThreshold,
    #[error("no repeated configuration within {max_steps} steps")]
    StepLimitExceeded { max_steps: usize },
    #[error("{n} vertices exceeds the packed kernel limit of 64")]
    TooManyVertices { n: usize },
}

/// A ±1 state vector, packed one bit per vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    n: usize,
    words: Vec<u64>,
}

impl Configuration {
    /// All vertices in state `+1` (`positive`) or `-1`.
    pub fn uniform(n: usize, positive: bool) -> Self {
        let mut c = Configuration { n, words: vec![0; words_for(n)] };
        if positive {
            for v in 0..n {
                c.set(v, true);
            }
        }
        c
    }

    pub fn from_states(states: &[i8]) -> Result<Self, DynamicsError> {
        let mut c = Self::uniform(states.len(), false);
        for (i, &s) in states.iter().enumerate() {
            match s {
                1 => c.set(i, true),
                -1 => {}
                _ => return Err(DynamicsError::IllegalState { position: i + 1, value: s }),
            }
        }
        Ok(c)
    }

    /// Builds a configuration on `n <= 64` vertices from the low bits of `bits`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        assert!(n <= 64, "from_bits needs n <= 64");
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Configuration { n, words: vec![bits & mask] }
    }

    /// Low word, for configurations on at most 64 vertices.
    pub fn to_bits(&self) -> u64 {
        self.words[0]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// True iff vertex `v` is in state +1.
    pub fn is_positive(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn state(&self, v: usize) -> i8 {
        if self.is_positive(v) {
            1
        } else {
            -1
        }
    }

    pub fn states(&self) -> Vec<i8> {
        (0..self.n).map(|v| self.state(v)).collect()
    }

    pub fn set(&mut self, v: usize, positive: bool) {
        let bit = 1u64 << (v % 64);
        if positive {
            self.words[v / 64] |= bit;
        } else {
            self.words[v / 64] &= !bit;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_monochromatic(&self) -> bool {
        let positives: u32 = self.words.iter().map(|w| w.count_ones()).sum();
        positives == 0 || positives as usize == self.n
    }

    /// Applies a relabeling: the state of `v` moves to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Configuration {
        let mut out = Configuration::uniform(self.n, false);
        for v in 0..self.n {
            out.set(perm[v], self.is_positive(v));
        }
        out
    }

    /// One byte per vertex, 1 for +1 and 0 for -1.
    pub fn color_bytes(&self) -> Vec<u8> {
        (0..self.n).map(|v| u8::from(self.is_positive(v))).collect()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in 0..self.n {
            f.write_str(if self.is_positive(v) { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({self})")
    }
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let n = s.chars().count();
        parse_config(&s, n).map_err(serde::de::Error::custom)
    }
}

/// Parses `n` characters drawn from `{+,-}` or from `{1,0}` (`1` is +1).
/// The two alphabets cannot be mixed. Surrounding whitespace is ignored.
pub fn parse_config(text: &str, n: usize) -> Result<Configuration, DynamicsError> {
    let text = text.trim();
    let got = text.chars().count();
    if got != n {
        return Err(DynamicsError::WrongLength { expected: n, got });
    }
    let signs = text.starts_with(['+', '-']);
    let mut c = Configuration::uniform(n, false);
    for (i, ch) in text.chars().enumerate() {
        let positive = match (signs, ch) {
            (true, '+') | (false, '1') => true,
            (true, '-') | (false, '0') => false,
            _ => return Err(DynamicsError::IllegalCharacter { position: i + 1, ch }),
        };
        c.set(i, positive);
    }
    Ok(c)
}

/// Global negation: every state multiplied by -1.
pub fn negate(x: &Configuration) -> Configuration {
    let mut out = x.clone();
    for (i, w) in out.words.iter_mut().enumerate() {
        let live = (x.n - 64 * i).min(64);
        let mask = if live == 64 { u64::MAX } else { (1u64 << live) - 1 };
        *w = !*w & mask;
    }
    out
}

/// op(t): per-vertex count of neighbors in a different state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OpCounts(pub Vec<u32>);

impl OpCounts {
    pub fn get(&self, v: usize) -> u32 {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

fn check_len(g: &Graph, x: &Configuration) -> Result<(), DynamicsError> {
    if g.n() != x.len() {
        return Err(DynamicsError::WrongLength { expected: g.n(), got: x.len() });
    }
    Ok(())
}

#[inline]
fn discordant(g: &Graph, x: &Configuration, v: usize) -> u32 {
    let own = if x.is_positive(v) { u64::MAX } else { 0 };
    g.neighbor_mask(v)
        .iter()
        .zip(&x.words)
        .map(|(m, w)| (m & (w ^ own)).count_ones())
        .sum()
}

pub(crate) fn op_counts_unchecked(g: &Graph, x: &Configuration) -> OpCounts {
    OpCounts((0..g.n()).map(|v| discordant(g, x, v)).collect())
}

pub fn op_counts(g: &Graph, x: &Configuration) -> Result<OpCounts, DynamicsError> {
    check_len(g, x)?;
    Ok(op_counts_unchecked(g, x))
}

pub(crate) fn step_unchecked(g: &Graph, x: &Configuration, k: u32) -> Configuration {
    let mut next = x.clone();
    for v in 0..g.n() {
        if discordant(g, x, v) >= k {
            next.words[v / 64] ^= 1 << (v % 64);
        }
    }
    next
}

/// One synchronous update: `x'_i = -x_i` iff `op_i >= k`.
pub fn step(g: &Graph, x: &Configuration, k: u32) -> Result<Configuration, DynamicsError> {
    if k == 0 {
        return Err(DynamicsError::ZeroThreshold);
    }
    check_len(g, x)?;
    Ok(step_unchecked(g, x, k))
}

/// Step budget that the general transient bound n(Δ+1)−1 guarantees is
/// enough to see the first repeat, with room for one full period.
pub fn default_max_steps(g: &Graph) -> usize {
    g.n() * (g.max_degree() + 1) + 3
}

/// E(t) computed from op counts: Σ |op_i − k|.
pub(crate) fn energy_from_ops(ops: &OpCounts, k: u32) -> u64 {
    ops.0.iter().map(|&op| u64::from(op.abs_diff(k))).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: usize,
    #[serde(rename = "x")]
    pub config: Configuration,
    #[serde(rename = "E")]
    pub energy: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryResult {
    pub tau: usize,
    pub period: usize,
    /// E at the first periodic configuration, i.e. E(t_max).
    pub plateau_energy: u64,
    /// Times `0..=tau + period`; the last entry repeats `trace[tau]`.
    pub trace: Vec<TraceRecord>,
}

impl TrajectoryResult {
    pub fn energies(&self) -> impl Iterator<Item = u64> + '_ {
        self.trace.iter().map(|r| r.energy)
    }

    /// Trace as JSON lines, `{"t":..,"x":"+-..","E":..}`.
    pub fn trace_json_lines(&self) -> String {
        self.trace
            .iter()
            .map(|r| serde_json::to_string(r).expect("trace records serialize") + "\n")
            .collect()
    }
}

/// Iterates `step` from `x0`, remembering the first time each configuration
/// was seen. The first repeat at time `t` of a configuration first seen at
/// `t0` gives `tau = t0` and `period = t - t0`.
pub fn run_trajectory(
    g: &Graph,
    x0: &Configuration,
    k: u32,
    max_steps: usize,
) -> Result<TrajectoryResult, DynamicsError> {
    if k == 0 {
        return Err(DynamicsError::ZeroThreshold);
    }
    check_len(g, x0)?;
    let mut seen: HashMap<Configuration, usize> = HashMap::new();
    let mut trace = Vec::new();
    let mut x = x0.clone();
    for t in 0..=max_steps {
        let energy = energy_from_ops(&op_counts_unchecked(g, &x), k);
        if let Some(&t0) = seen.get(&x) {
            trace.push(TraceRecord { t, config: x, energy });
            return Ok(TrajectoryResult {
                tau: t0,
                period: t - t0,
                plateau_energy: trace[t0].energy,
                trace,
            });
        }
        seen.insert(x.clone(), t);
        let next = step_unchecked(g, &x, k);
        trace.push(TraceRecord { t, config: x, energy });
        x = next;
    }
    Err(DynamicsError::StepLimitExceeded { max_steps })
}

/// Packed single-word kernel for graphs on at most 64 vertices, used by the
/// exhaustive sweeps. Same rule as [`step`], computed on a bare `u64`.
#[derive(Debug, Clone)]
pub struct WordKernel {
    n: usize,
    masks: Vec<u64>,
    full: u64,
}

/// Outcome of a kernel trajectory together with its energy trace.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KernelRun {
    pub tau: usize,
    pub period: usize,
    /// E(0), E(1), ..., E(tau + period).
    pub energies: Vec<u64>,
}

impl KernelRun {
    pub fn plateau_energy(&self) -> u64 {
        self.energies[self.tau]
    }
}

impl WordKernel {
    pub fn new(g: &Graph) -> Result<Self, DynamicsError> {
        if g.n() > 64 {
            return Err(DynamicsError::TooManyVertices { n: g.n() });
        }
        let masks = (0..g.n()).map(|v| g.neighbor_mask(v)[0]).collect();
        let full = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
        Ok(WordKernel { n: g.n(), masks, full })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full_mask(&self) -> u64 {
        self.full
    }

    /// Next configuration and E of the current one.
    #[inline]
    pub fn step(&self, x: u64, k: u32) -> (u64, u64) {
        let mut flips = 0u64;
        let mut energy = 0u64;
        for (v, &m) in self.masks.iter().enumerate() {
            let own = 0u64.wrapping_sub(x >> v & 1);
            let op = (m & (x ^ own)).count_ones();
            energy += u64::from(op.abs_diff(k));
            flips |= u64::from(op >= k) << v;
        }
        (x ^ flips, energy)
    }

    /// Runs from `x0` until the first repeat, reusing `history` and `out`
    /// as scratch space. Repeat detection scans the history linearly, which
    /// is exact and cheap for the short transients of small graphs.
    pub fn run_into(
        &self,
        x0: u64,
        k: u32,
        max_steps: usize,
        history: &mut Vec<u64>,
        out: &mut KernelRun,
    ) -> Result<(), DynamicsError> {
        history.clear();
        out.energies.clear();
        let mut x = x0;
        for t in 0..=max_steps {
            let (next, energy) = self.step(x, k);
            out.energies.push(energy);
            if let Some(t0) = history.iter().position(|&h| h == x) {
                out.tau = t0;
                out.period = t - t0;
                return Ok(());
            }
            history.push(x);
            x = next;
        }
        Err(DynamicsError::StepLimitExceeded { max_steps })
    }

    pub fn run(&self, x0: u64, k: u32, max_steps: usize) -> Result<KernelRun, DynamicsError> {
        let mut out = KernelRun::default();
        self.run_into(x0, k, max_steps, &mut Vec::new(), &mut out)?;
        Ok(out)
    }
}
