//! Simple undirected graphs with packed neighbor bitsets, plus the edge-list
//! text format.
//!
//! Vertices are 0-based inside the library. The text format is 1-based:
//!
//! ```text
//! # optional comments
//! n=3
//! 1 2
//! 2 3
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

/// Errors raised while building or parsing a graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("line {line}: missing or malformed header, expected `n=<int>`")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed edge `{text}`, expected `u v`")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("graph is not a tree")]
    NotATree,
    #[error("{n} vertices exceeds the supported limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Immutable simple undirected graph.
///
/// Besides adjacency lists, each vertex carries its neighborhood as a packed
/// bitset of `words` 64-bit words so that discordant-neighbor counts reduce
/// to popcounts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    words: usize,
    masks: Vec<u64>,
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl Graph {
    /// Builds a graph on `n` vertices from 0-based edges.
    ///
    /// Edge order is irrelevant; edges are stored normalized (`u < v`) and
    /// sorted. Self-loops and duplicates are rejected, with `line` in the
    /// error set to the 1-based position of the offending edge in `edges`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = BTreeSet::new();
        for (idx, (u, v)) in edges.into_iter().enumerate() {
            let line = idx + 1;
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { line, vertex: w + 1, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, vertex: u + 1 });
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge { line, u: u + 1, v: v + 1 });
            }
        }
        Ok(Self::from_normalized(n, seen.into_iter().collect()))
    }

    fn from_normalized(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let words = words_for(n);
        let mut adjacency = vec![Vec::new(); n];
        let mut masks = vec![0u64; n * words];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
            masks[u * words + v / 64] |= 1 << (v % 64);
            masks[v * words + u / 64] |= 1 << (u % 64);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph { n, edges, adjacency, words, masks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Normalized 0-based edges, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Δ(G). Zero for an edgeless graph.
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.masks[u * self.words + v / 64] & (1 << (v % 64)) != 0
    }

    /// Number of 64-bit words per neighborhood bitset.
    pub fn words(&self) -> usize {
        self.words
    }

    /// Packed neighborhood of `v`.
    pub fn neighbor_mask(&self, v: usize) -> &[u64] {
        &self.masks[v * self.words..(v + 1) * self.words]
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// True iff the graph is connected with exactly `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        self.m() + 1 == self.n && self.is_connected()
    }

    /// Applies a vertex relabeling: vertex `v` becomes `perm[v]`.
    ///
    /// # Panics
    /// If `perm` is not a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut hit = vec![false; self.n];
        for &p in perm {
            assert!(p < self.n && !hit[p], "not a permutation");
            hit[p] = true;
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        Graph::from_normalized(self.n, edges)
    }

    /// Edges as 1-based pairs, the convention used by every file format.
    pub fn one_based_edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(u, v)| (u + 1, v + 1)).collect()
    }

    /// Serializes to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for (u, v) in self.one_based_edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Compact single-line rendering, e.g. `1-2 2-3`.
    pub fn edge_string(&self) -> String {
        self.one_based_edges()
            .iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parses the edge-list text format.
///
/// Blank lines and anything after `#` are ignored. The first remaining line
/// must be `n=<int>`; every following line is a 1-based pair `u v`.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut n: Option<usize> = None;
    let mut seen = BTreeSet::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some(n) = n else {
            let value = content
                .strip_prefix("n=")
                .or_else(|| content.strip_prefix("n ="))
                .map(str::trim)
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&v| v > 0);
            match value {
                Some(v) => n = Some(v),
                None => return Err(GraphError::MissingHeader { line }),
            }
            continue;
        };
        let malformed = || GraphError::MalformedLine { line, text: content.to_string() };
        let mut parts = content.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(malformed());
        };
        let u: usize = a.parse().map_err(|_| malformed())?;
        let v: usize = b.parse().map_err(|_| malformed())?;
        for w in [u, v] {
            if w == 0 || w > n {
                return Err(GraphError::VertexOutOfRange { line, vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, vertex: u });
        }
        if !seen.insert((u.min(v) - 1, u.max(v) - 1)) {
            return Err(GraphError::DuplicateEdge { line, u, v });
        }
    }
    let n = n.ok_or(GraphError::MissingHeader { line: last_line.max(1) })?;
    Ok(Graph::from_normalized(n, seen.into_iter().collect()))
}

/// Common test and CLI fixtures.
pub mod named {
    use super::Graph;

    /// Path on `n` vertices, `0 - 1 - ... - n-1`.
    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    /// Star `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Graph {
        Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star is simple")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_p3() {
        let g = parse_edge_list("n=3\n1 2\n2 3").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
        assert!(g.has_edge(1, 0) && !g.has_edge(0, 2));
    }

    #[test]
    fn parses_figure_one_top_tree() {
        let text = "n=8\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n6 8\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.m(), 7);
        assert_eq!(g.max_degree(), 3);
        assert!(g.is_tree());
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_edge_list("# header\n\nn=4 # four\n1 2 # first\n\n3 4\n").unwrap();
        assert_eq!(g.m(), 2);
        assert!(!g.is_connected());
    }

    #[test]
    fn distinct_parse_errors() {
        assert_eq!(
            parse_edge_list("n=2\n1 1"),
            Err(GraphError::SelfLoop { line: 2, vertex: 1 })
        );
        assert_eq!(
            parse_edge_list("n=3\n1 2\n2 1"),
            Err(GraphError::DuplicateEdge { line: 3, u: 2, v: 1 })
        );
        assert_eq!(
            parse_edge_list("n=3\n1 4"),
            Err(GraphError::VertexOutOfRange { line: 2, vertex: 4, n: 3 })
        );
        assert_eq!(
            parse_edge_list("n=3\n0 1"),
            Err(GraphError::VertexOutOfRange { line: 2, vertex: 0, n: 3 })
        );
        assert!(matches!(
            parse_edge_list("n=3\n1 2 3"),
            Err(GraphError::MalformedLine { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("n=3\n1 x"),
            Err(GraphError::MalformedLine { .. })
        ));
        assert_eq!(parse_edge_list("1 2"), Err(GraphError::MissingHeader { line: 1 }));
        assert_eq!(parse_edge_list(""), Err(GraphError::MissingHeader { line: 1 }));
        assert_eq!(parse_edge_list("n=0"), Err(GraphError::MissingHeader { line: 1 }));
    }

    #[test]
    fn tree_recognition() {
        assert!(named::path(3).is_tree());
        assert!(!named::cycle(3).is_tree());
        let two_edges = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!two_edges.is_tree());
        assert!(Graph::new(1, []).unwrap().is_tree());
        // m = n - 1 but disconnected
        let g = Graph::new(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!g.is_tree());
    }

    #[test]
    fn wide_graph_masks() {
        let g = named::path(130);
        assert_eq!(g.words(), 3);
        assert!(g.has_edge(63, 64) && g.has_edge(128, 129));
        let popcount: u32 = g.neighbor_mask(64).iter().map(|w| w.count_ones()).sum();
        assert_eq!(popcount, 2);
    }

    #[test]
    fn relabel_preserves_degree_multiset() {
        let g = named::star(3);
        let h = g.relabel(&[3, 0, 1, 2]);
        assert_eq!(h.degree(3), 3);
        assert_eq!(h.m(), 3);
    }

    #[test]
    fn round_trip() {
        let g = named::cycle(5);
        assert_eq!(parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }
}
