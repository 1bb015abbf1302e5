//! Canonical codes for unlabeled trees.
//!
//! A tree is rooted at its center (for bicentral trees, at whichever center
//! gives the smaller code) and encoded as the level sequence of its
//! canonically ordered form: a preorder list of depths where sibling subtrees
//! appear in lexicographically descending order of their own encodings.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::{Graph, GraphError};

/// Codes store depths in single bytes.
pub const MAX_CANON_VERTICES: usize = 255;

/// Relabeling-invariant identifier of a tree's isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self, hex::FromHexError> {
        hex::decode(s).map(CanonicalCode)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalCode::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// Center vertices of a tree (one or two), found by repeated leaf removal.
pub fn centers(tree: &Graph) -> Vec<usize> {
    let n = tree.n();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree = tree.degrees();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &w in tree.neighbors(leaf) {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn check_tree(tree: &Graph) -> Result<(), GraphError> {
    if tree.n() > MAX_CANON_VERTICES {
        return Err(GraphError::TooLarge { n: tree.n(), limit: MAX_CANON_VERTICES });
    }
    if !tree.is_tree() {
        return Err(GraphError::NotATree);
    }
    Ok(())
}

/// Canonical ordered encoding of the subtree at `v`. With `colors`, each node
/// emits its color byte right after its depth.
fn encode(tree: &Graph, v: usize, parent: usize, depth: u8, colors: Option<&[u8]>) -> Vec<u8> {
    let mut children: Vec<Vec<u8>> = tree
        .neighbors(v)
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| encode(tree, w, v, depth + 1, colors))
        .collect();
    children.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::with_capacity(1 + children.iter().map(Vec::len).sum::<usize>());
    out.push(depth);
    if let Some(c) = colors {
        out.push(c[v]);
    }
    for child in children {
        out.extend(child);
    }
    out
}

fn best_over_centers(tree: &Graph, colors: Option<&[u8]>) -> Vec<u8> {
    centers(tree)
        .into_iter()
        .map(|c| encode(tree, c, usize::MAX, 0, colors))
        .min()
        .expect("a tree has at least one center")
}

/// Canonical level sequence of `tree` rooted at `root`.
pub fn rooted_level_sequence(tree: &Graph, root: usize) -> Result<Vec<u8>, GraphError> {
    check_tree(tree)?;
    Ok(encode(tree, root, usize::MAX, 0, None))
}

/// Isomorphism-invariant code of an unlabeled tree.
pub fn canonical_code(tree: &Graph) -> Result<CanonicalCode, GraphError> {
    check_tree(tree)?;
    Ok(CanonicalCode(best_over_centers(tree, None)))
}

/// Code of a vertex-colored tree; equal codes mean a color-preserving
/// isomorphism exists. Two colorings of the same tree share a code iff they
/// lie in the same orbit of its automorphism group.
pub fn colored_code(tree: &Graph, colors: &[u8]) -> Result<CanonicalCode, GraphError> {
    check_tree(tree)?;
    assert_eq!(colors.len(), tree.n(), "one color per vertex");
    Ok(CanonicalCode(best_over_centers(tree, Some(colors))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{path, star};

    #[test]
    fn centers_of_paths_and_stars() {
        assert_eq!(centers(&path(1)), vec![0]);
        assert_eq!(centers(&path(2)), vec![0, 1]);
        assert_eq!(centers(&path(5)), vec![2]);
        assert_eq!(centers(&path(6)), vec![2, 3]);
        assert_eq!(centers(&star(4)), vec![0]);
    }

    #[test]
    fn relabeled_p3_has_same_code() {
        let a = path(3);
        let b = Graph::new(3, [(1, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_code(&a).unwrap(), canonical_code(&b).unwrap());
    }

    #[test]
    fn star_and_path_differ() {
        assert_ne!(canonical_code(&star(3)).unwrap(), canonical_code(&path(4)).unwrap());
    }

    #[test]
    fn star_code_is_level_sequence() {
        assert_eq!(canonical_code(&star(3)).unwrap().as_bytes(), &[0, 1, 1, 1]);
        assert_eq!(canonical_code(&path(4)).unwrap().as_bytes(), &[0, 1, 2, 1]);
    }

    #[test]
    fn rejects_non_trees() {
        let triangle = crate::graph::named::cycle(3);
        assert_eq!(canonical_code(&triangle), Err(GraphError::NotATree));
    }

    #[test]
    fn hex_round_trip() {
        let code = canonical_code(&path(6)).unwrap();
        let json = serde_json::to_string(&code).unwrap();
        assert_eq!(json, format!("\"{}\"", code.to_hex()));
        let back: CanonicalCode = serde_json::from_str(&json).unwrap();
        assert_eq!(back, code);
    }

    #[test]
    fn colored_code_sees_leaf_swap_as_same_orbit() {
        // path 0-1-2: leaves 0 and 2 are swapped by the automorphism
        let g = path(3);
        let a = colored_code(&g, &[1, 0, 0]).unwrap();
        let b = colored_code(&g, &[0, 0, 1]).unwrap();
        let c = colored_code(&g, &[0, 1, 0]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
