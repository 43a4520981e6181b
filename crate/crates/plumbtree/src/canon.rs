//! Canonical string encodings of weighted trees, used to memoize search
//! states up to isomorphism.
//!
//! The encoding is AHU-style: root the tree at its center (one or two
//! middle vertices of a longest path), encode each vertex as its label
//! followed by the sorted encodings of its subtrees, and take the
//! lexicographically smaller of the (at most two) center-rooted strings.
//! Labels are the vertex weight, plus the id for "pinned" vertices that
//! a search is not allowed to treat as interchangeable.

use std::collections::{BTreeMap, BTreeSet};

use crate::tree::{PlumbingTree, VertexId};

/// Center vertices of the tree: one or two, found by peeling leaves.
fn centers(tree: &PlumbingTree) -> Vec<VertexId> {
    let mut degree: BTreeMap<VertexId, usize> = tree
        .vertices()
        .map(|v| (v, tree.degree(v).expect("vertex exists")))
        .collect();
    let mut remaining: BTreeSet<VertexId> = tree.vertices().collect();
    let mut layer: Vec<VertexId> = remaining
        .iter()
        .copied()
        .filter(|v| degree[v] <= 1)
        .collect();
    while remaining.len() > 2 {
        let mut next = Vec::new();
        for v in layer {
            remaining.remove(&v);
            for n in tree.neighbors(v) {
                if remaining.contains(&n) {
                    let d = degree.get_mut(&n).expect("neighbor tracked");
                    *d -= 1;
                    if *d == 1 {
                        next.push(n);
                    }
                }
            }
        }
        layer = next;
    }
    remaining.into_iter().collect()
}

fn encode_rooted(
    tree: &PlumbingTree,
    pinned: &BTreeSet<VertexId>,
    v: VertexId,
    parent: Option<VertexId>,
) -> String {
    let label = if pinned.contains(&v) {
        format!("#{}:{}", v, tree.weight(v).expect("vertex exists"))
    } else {
        tree.weight(v).expect("vertex exists").to_string()
    };
    let mut subs: Vec<String> = tree
        .neighbors(v)
        .filter(|&n| Some(n) != parent)
        .map(|n| encode_rooted(tree, pinned, n, Some(v)))
        .collect();
    subs.sort();
    let mut out = label;
    out.push('(');
    out.push_str(&subs.join(","));
    out.push(')');
    out
}

/// Canonical key of a weighted tree up to weight-preserving isomorphism
/// that fixes the pinned vertices pointwise.
pub fn canonical_key(tree: &PlumbingTree, pinned: &BTreeSet<VertexId>) -> String {
    centers(tree)
        .into_iter()
        .map(|c| encode_rooted(tree, pinned, c, None))
        .min()
        .expect("tree is nonempty")
}
