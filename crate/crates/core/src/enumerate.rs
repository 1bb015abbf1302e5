//! Free-tree enumeration.
//!
//! [`FreeTrees`] walks canonical level sequences of center-rooted trees with
//! the Wright–Richmond–Odlyzko–McKay successor rule, which yields exactly one
//! labeled representative per isomorphism class in constant amortized time.
//! [`prufer_oracle_trees`] is an independent, brute-force oracle used to check
//! it: decode every Prüfer sequence and deduplicate by canonical code.

use std::collections::BTreeMap;

use crate::canon::canonical_code;
use crate::graph::{Graph, GraphError};

/// Largest `n` accepted by the Prüfer oracle (n^(n-2) labeled trees).
pub const PRUFER_ORACLE_MAX: usize = 9;

/// Builds a tree from a level sequence (preorder depths, root at depth 0).
/// Vertex `i` of the result is the `i`-th entry of the sequence.
///
/// # Panics
/// If the sequence is not a valid level sequence.
pub fn tree_from_level_sequence(levels: &[usize]) -> Graph {
    assert!(!levels.is_empty() && levels[0] == 0, "level sequence must start at the root");
    let mut last_at_depth: Vec<usize> = vec![0];
    let mut edges = Vec::with_capacity(levels.len() - 1);
    for (i, &d) in levels.iter().enumerate().skip(1) {
        assert!(d >= 1 && d <= last_at_depth.len(), "depth jumps by more than one");
        edges.push((last_at_depth[d - 1], i));
        last_at_depth.truncate(d);
        last_at_depth.push(i);
    }
    Graph::new(levels.len(), edges).expect("level sequences describe simple trees")
}

/// Successor of a canonical rooted level sequence, regenerating from
/// position `p`. With `p = None` the last entry deeper than 1 is used.
pub(crate) fn next_rooted(pred: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = pred.len() - 1;
            while p > 0 && pred[p] == 1 {
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while pred[q] != pred[p] - 1 {
        q -= 1;
    }
    let mut next = pred.to_vec();
    for i in p..next.len() {
        next[i] = next[i - p + q];
    }
    Some(next)
}

/// Splits a layout into the first subtree of the root (depths shifted by
/// one) and the remainder with the root kept.
fn split(layout: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let m = layout
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, &d)| d == 1)
        .nth(1)
        .map_or(layout.len(), |(i, _)| i);
    let left = layout[1..m].iter().map(|d| d - 1).collect();
    let mut rest = Vec::with_capacity(layout.len() - m + 1);
    rest.push(0);
    rest.extend_from_slice(&layout[m..]);
    (left, rest)
}

fn next_free(candidate: Vec<usize>) -> Option<Vec<usize>> {
    let (left, rest) = split(&candidate);
    let left_height = left.iter().copied().max().unwrap_or(0);
    let rest_height = rest.iter().copied().max().unwrap_or(0);
    let mut valid = rest_height >= left_height;
    if valid && rest_height == left_height {
        if left.len() > rest.len() || (left.len() == rest.len() && left > rest) {
            valid = false;
        }
    }
    if valid {
        return Some(candidate);
    }
    let p = left.len();
    let mut next = next_rooted(&candidate, Some(p))?;
    if candidate[p] > 2 {
        let (new_left, _) = split(&next);
        let h = new_left.iter().copied().max().unwrap_or(0);
        let len = next.len();
        for (slot, depth) in next[len - (h + 1)..].iter_mut().zip(1..) {
            *slot = depth;
        }
    }
    Some(next)
}

/// Iterator over one representative of every free tree on `n` vertices.
///
/// Order is deterministic: it starts from the path and ends at the star.
#[derive(Debug, Clone)]
pub struct FreeTrees {
    state: State,
}

#[derive(Debug, Clone)]
enum State {
    Single(Option<Graph>),
    Layout(Option<Vec<usize>>),
}

impl FreeTrees {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "trees need at least one vertex");
        let state = match n {
            1 => State::Single(Some(Graph::new(1, []).expect("K1"))),
            2 => State::Single(Some(Graph::new(2, [(0, 1)]).expect("K2"))),
            _ => {
                let mut layout: Vec<usize> = (0..=n / 2).collect();
                layout.extend(1..n.div_ceil(2));
                State::Layout(Some(layout))
            }
        };
        FreeTrees { state }
    }
}

impl Iterator for FreeTrees {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        match &mut self.state {
            State::Single(slot) => slot.take(),
            State::Layout(slot) => {
                let layout = next_free(slot.take()?)?;
                *slot = next_rooted(&layout, None);
                Some(tree_from_level_sequence(&layout))
            }
        }
    }
}

/// All free trees on `n >= 1` vertices.
pub fn enumerate_free_trees(n: usize) -> FreeTrees {
    FreeTrees::new(n)
}

/// Decodes a Prüfer sequence over `0..n` into the labeled tree on `n`
/// vertices it encodes.
pub fn prufer_decode(seq: &[usize], n: usize) -> Graph {
    assert_eq!(seq.len() + 2, n, "Prüfer sequences have length n - 2");
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf always exists");
        edges.push((leaf, s));
        degree[leaf] = 0;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, edges).expect("Prüfer decoding yields a simple tree")
}

/// Brute-force oracle: every labeled tree from every Prüfer sequence,
/// deduplicated by canonical code. Returned in canonical-code order.
pub fn prufer_oracle_trees(n: usize) -> Result<Vec<Graph>, GraphError> {
    if !(2..=PRUFER_ORACLE_MAX).contains(&n) {
        return Err(GraphError::TooLarge { n, limit: PRUFER_ORACLE_MAX });
    }
    let mut classes = BTreeMap::new();
    let mut seq = vec![0usize; n - 2];
    loop {
        let tree = prufer_decode(&seq, n);
        let code = canonical_code(&tree)?;
        classes.entry(code).or_insert(tree);
        // odometer increment
        let mut i = 0;
        loop {
            if i == seq.len() {
                return Ok(classes.into_values().collect());
            }
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}
