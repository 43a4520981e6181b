//! The plumbing-tree data model: integer-weighted finite trees with
//! stable vertex ids, framing matrices and structural queries.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::matrix::SymMatrix;
use crate::rational::rat;

/// Stable vertex identifier. Ids are caller-supplied and never reused
/// within one tree's lifetime; rewrites mint fresh ids above the current
/// maximum.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u64);

impl VertexId {
    pub fn id(self) -> u64 {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for VertexId {
    fn from(v: u64) -> Self {
        VertexId(v)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex order is not a permutation of the vertex set")]
    BadOrder,
}

/// A maximal linear subpath from a vertex of degree >= 3 through
/// degree-2 vertices to a leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub anchor: VertexId,
    pub chain: Vec<VertexId>,
    pub leaf: VertexId,
}

impl Branch {
    /// Anchor, chain and leaf in path order.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut v = Vec::with_capacity(self.chain.len() + 2);
        v.push(self.anchor);
        v.extend_from_slice(&self.chain);
        v.push(self.leaf);
        v
    }
}

/// Partition of the vertex set by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeClasses {
    /// Degree <= 1 (an isolated vertex counts as a leaf).
    pub leaves: BTreeSet<VertexId>,
    pub degree2: BTreeSet<VertexId>,
    /// Degree >= 3.
    pub high_degree: BTreeSet<VertexId>,
}

/// A finite tree with an integer weight (Euler number) at every vertex.
///
/// Value-semantic: rewrites return new trees and never mutate, so trees
/// can be logged, replayed and memoized freely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingTree {
    weights: BTreeMap<VertexId, i64>,
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl PlumbingTree {
    /// Validate and build a tree from weights and an edge list.
    ///
    /// Rejects empty vertex sets, self-loops, duplicate edges, edges to
    /// undeclared vertices, cycles and disconnected inputs.
    pub fn build(
        weights: BTreeMap<VertexId, i64>,
        edges: &[(VertexId, VertexId)],
    ) -> Result<Self, TreeError> {
        if weights.is_empty() {
            return Err(TreeError::NotATree("no vertices".into()));
        }
        let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> =
            weights.keys().map(|&v| (v, BTreeSet::new())).collect();
        for &(u, v) in edges {
            if u == v {
                return Err(TreeError::NotATree(format!("self-loop at {u}")));
            }
            if !weights.contains_key(&u) || !weights.contains_key(&v) {
                return Err(TreeError::NotATree(format!(
                    "edge ({u},{v}) references an undeclared vertex"
                )));
            }
            if !adj.get_mut(&u).unwrap().insert(v) {
                return Err(TreeError::NotATree(format!("duplicate edge ({u},{v})")));
            }
            adj.get_mut(&v).unwrap().insert(u);
        }
        if edges.len() != weights.len() - 1 {
            return Err(TreeError::NotATree(format!(
                "{} vertices require {} edges, got {}",
                weights.len(),
                weights.len() - 1,
                edges.len()
            )));
        }
        let tree = PlumbingTree { weights, adj };
        if !tree.is_connected() {
            return Err(TreeError::NotATree("graph is disconnected".into()));
        }
        // |E| = |V| - 1 and connected implies acyclic
        Ok(tree)
    }

    /// Convenience constructor: a path with the given weights, ids 1..=n.
    pub fn path(weights: &[i64]) -> Self {
        let w: BTreeMap<VertexId, i64> = weights
            .iter()
            .enumerate()
            .map(|(i, &m)| (VertexId(i as u64 + 1), m))
            .collect();
        let edges: Vec<(VertexId, VertexId)> = (1..weights.len() as u64)
            .map(|i| (VertexId(i), VertexId(i + 1)))
            .collect();
        PlumbingTree::build(w, &edges).expect("path is a tree")
    }

    /// Convenience constructor: a star with center id 1 (given weight)
    /// and one leaf per arm weight, ids 2..
    pub fn star(center: i64, arms: &[i64]) -> Self {
        let mut w = BTreeMap::new();
        w.insert(VertexId(1), center);
        let mut edges = Vec::new();
        for (i, &m) in arms.iter().enumerate() {
            let v = VertexId(i as u64 + 2);
            w.insert(v, m);
            edges.push((VertexId(1), v));
        }
        PlumbingTree::build(w, &edges).expect("star is a tree")
    }

    fn is_connected(&self) -> bool {
        let start = match self.weights.keys().next() {
            Some(&v) => v,
            None => return false,
        };
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &n in &self.adj[&v] {
                if seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen.len() == self.weights.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len().saturating_sub(1)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.weights.contains_key(&v)
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.weights.keys().copied()
    }

    pub fn weight(&self, v: VertexId) -> Result<i64, TreeError> {
        self.weights
            .get(&v)
            .copied()
            .ok_or(TreeError::UnknownVertex(v))
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, TreeError> {
        self.adj
            .get(&v)
            .map(|s| s.len())
            .ok_or(TreeError::UnknownVertex(v))
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    /// Edges as (min, max) pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (&v, ns) in &self.adj {
            for &n in ns {
                if v < n {
                    out.push((v, n));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn max_id(&self) -> u64 {
        self.weights.keys().next_back().map_or(0, |v| v.0)
    }

    /// Framing matrix with rows/columns in ascending id order.
    pub fn framing_matrix(&self) -> SymMatrix {
        let order: Vec<VertexId> = self.vertices().collect();
        self.framing_matrix_with_order(&order)
            .expect("ascending order is a permutation")
    }

    /// Framing matrix in an explicit vertex order: weights on the
    /// diagonal, 1 where the vertices are adjacent, 0 otherwise.
    pub fn framing_matrix_with_order(
        &self,
        order: &[VertexId],
    ) -> Result<SymMatrix, TreeError> {
        if order.len() != self.weights.len() {
            return Err(TreeError::BadOrder);
        }
        let distinct: BTreeSet<VertexId> = order.iter().copied().collect();
        if distinct.len() != order.len() || !distinct.iter().all(|v| self.contains(*v)) {
            return Err(TreeError::BadOrder);
        }
        let rows: Vec<Vec<_>> = order
            .iter()
            .map(|&vi| {
                order
                    .iter()
                    .map(|&vj| {
                        if vi == vj {
                            rat(self.weights[&vi])
                        } else if self.has_edge(vi, vj) {
                            rat(1)
                        } else {
                            rat(0)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(SymMatrix::from_rows(rows).expect("framing matrix is symmetric"))
    }

    /// Partition the vertex set by degree.
    pub fn degree_classes(&self) -> DegreeClasses {
        let mut classes = DegreeClasses::default();
        for (&v, ns) in &self.adj {
            match ns.len() {
                0 | 1 => classes.leaves.insert(v),
                2 => classes.degree2.insert(v),
                _ => classes.high_degree.insert(v),
            };
        }
        classes
    }

    /// All branches: from each degree->=3 anchor, walk through degree-2
    /// vertices until a leaf. Arms that run into another high-degree
    /// vertex are connecting chains, not branches. Sorted by
    /// (anchor, leaf); empty when no high-degree vertex exists.
    pub fn branches(&self) -> Vec<Branch> {
        let mut out = Vec::new();
        for (&anchor, ns) in &self.adj {
            if ns.len() < 3 {
                continue;
            }
            for &first in ns {
                let mut chain = Vec::new();
                let mut prev = anchor;
                let mut cur = first;
                loop {
                    match self.adj[&cur].len() {
                        1 => {
                            out.push(Branch {
                                anchor,
                                chain,
                                leaf: cur,
                            });
                            break;
                        }
                        2 => {
                            let next = self.adj[&cur]
                                .iter()
                                .copied()
                                .find(|&n| n != prev)
                                .expect("degree-2 vertex has a second neighbor");
                            chain.push(cur);
                            prev = cur;
                            cur = next;
                        }
                        _ => break, // chain between two high-degree vertices
                    }
                }
            }
        }
        out.sort_by_key(|b| (b.anchor, b.leaf));
        out
    }

    // -- crate-internal mutation, used by the rewrite engine ---------------

    pub(crate) fn set_weight(&mut self, v: VertexId, w: i64) {
        *self.weights.get_mut(&v).expect("vertex exists") = w;
    }

    pub(crate) fn add_weight(&mut self, v: VertexId, delta: i64) {
        *self.weights.get_mut(&v).expect("vertex exists") += delta;
    }

    pub(crate) fn insert_vertex(&mut self, v: VertexId, w: i64) {
        debug_assert!(!self.weights.contains_key(&v));
        self.weights.insert(v, w);
        self.adj.insert(v, BTreeSet::new());
    }

    /// Remove a vertex together with its incident edges.
    pub(crate) fn remove_vertex(&mut self, v: VertexId) {
        let ns = self.adj.remove(&v).expect("vertex exists");
        for n in ns {
            self.adj.get_mut(&n).expect("neighbor exists").remove(&v);
        }
        self.weights.remove(&v);
    }

    pub(crate) fn insert_edge(&mut self, u: VertexId, v: VertexId) {
        debug_assert_ne!(u, v);
        self.adj.get_mut(&u).expect("vertex exists").insert(v);
        self.adj.get_mut(&v).expect("vertex exists").insert(u);
    }

    pub(crate) fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        self.adj.get_mut(&u).expect("vertex exists").remove(&v);
        self.adj.get_mut(&v).expect("vertex exists").remove(&u);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn v(id: u64) -> VertexId {
        VertexId(id)
    }

    #[test]
    fn build_validates() {
        // cycle
        let w: BTreeMap<VertexId, i64> = [(v(1), 1), (v(2), 1), (v(3), 1)].into_iter().collect();
        let err = PlumbingTree::build(w, &[(v(1), v(2)), (v(2), v(3)), (v(3), v(1))]).unwrap_err();
        assert!(matches!(err, TreeError::NotATree(_)));

        // disconnected
        let w: BTreeMap<VertexId, i64> = [(v(1), 1), (v(2), 1)].into_iter().collect();
        assert!(matches!(
            PlumbingTree::build(w, &[]),
            Err(TreeError::NotATree(_))
        ));

        // undeclared endpoint
        let w: BTreeMap<VertexId, i64> = [(v(1), 5)].into_iter().collect();
        assert!(matches!(
            PlumbingTree::build(w, &[(v(1), v(9))]),
            Err(TreeError::NotATree(_))
        ));

        // valid path
        let t = PlumbingTree::path(&[5, 0]);
        assert_eq!(t.vertex_count(), 2);
        assert_eq!(t.weight(v(1)).unwrap(), 5);
        assert_eq!(t.weight(v(2)).unwrap(), 0);
    }

    #[test]
    fn framing_matrices() {
        let t = PlumbingTree::path(&[5, 0]);
        assert_eq!(
            t.framing_matrix(),
            SymMatrix::from_int_rows(&[&[5, 1], &[1, 0]]).unwrap()
        );

        let single = PlumbingTree::path(&[-7]);
        assert_eq!(
            single.framing_matrix(),
            SymMatrix::from_int_rows(&[&[-7]]).unwrap()
        );

        let star = PlumbingTree::star(-2, &[2, -1, -1]);
        assert_eq!(
            star.framing_matrix(),
            SymMatrix::from_int_rows(&[
                &[-2, 1, 1, 1],
                &[1, 2, 0, 0],
                &[1, 0, -1, 0],
                &[1, 0, 0, -1],
            ])
            .unwrap()
        );

        // off-diagonal ones count = 2|E|
        let m = star.framing_matrix();
        let ones = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && *m.get(i, j) == rat(1))
            .count();
        assert_eq!(ones, 2 * star.edge_count());
    }

    #[test]
    fn framing_matrix_respects_custom_order() {
        let star = PlumbingTree::star(-2, &[2, -1, -1]);
        let m = star
            .framing_matrix_with_order(&[v(4), v(3), v(2), v(1)])
            .unwrap();
        assert_eq!(
            m,
            SymMatrix::from_int_rows(&[
                &[-1, 0, 0, 1],
                &[0, -1, 0, 1],
                &[0, 0, 2, 1],
                &[1, 1, 1, -2],
            ])
            .unwrap()
        );
        assert_eq!(m.signature(), star.framing_matrix().signature());
    }

    #[test]
    fn bad_order_rejected() {
        let t = PlumbingTree::path(&[5, 0]);
        assert_eq!(
            t.framing_matrix_with_order(&[v(1), v(1)]).unwrap_err(),
            TreeError::BadOrder
        );
        assert_eq!(
            t.framing_matrix_with_order(&[v(1)]).unwrap_err(),
            TreeError::BadOrder
        );
        assert_eq!(
            t.framing_matrix_with_order(&[v(1), v(3)]).unwrap_err(),
            TreeError::BadOrder
        );
    }

    #[test]
    fn degree_classes_examples() {
        let star = PlumbingTree::star(-2, &[2, -1, -1]);
        let c = star.degree_classes();
        assert_eq!(c.high_degree, [v(1)].into_iter().collect());
        assert_eq!(c.leaves, [v(2), v(3), v(4)].into_iter().collect());
        assert!(c.degree2.is_empty());

        let path = PlumbingTree::path(&[1, 2, 3, 4]);
        let c = path.degree_classes();
        assert_eq!(c.leaves, [v(1), v(4)].into_iter().collect());
        assert_eq!(c.degree2, [v(2), v(3)].into_iter().collect());
        assert!(c.high_degree.is_empty());

        let single = PlumbingTree::path(&[3]);
        assert_eq!(single.degree_classes().leaves, [v(1)].into_iter().collect());
    }

    #[test]
    fn branches_examples() {
        let star = PlumbingTree::star(-2, &[2, -1, -1]);
        let bs = star.branches();
        assert_eq!(bs.len(), 3);
        assert!(bs.iter().all(|b| b.anchor == v(1) && b.chain.is_empty()));

        assert!(PlumbingTree::path(&[5, 0]).branches().is_empty());

        // star with one arm extended: 1(-2) with arms [2], [-1], and -3 -- -4
        let mut w: BTreeMap<VertexId, i64> = BTreeMap::new();
        w.insert(v(1), -2);
        w.insert(v(2), 2);
        w.insert(v(3), -1);
        w.insert(v(4), -3);
        w.insert(v(5), -4);
        let t = PlumbingTree::build(
            w,
            &[(v(1), v(2)), (v(1), v(3)), (v(1), v(4)), (v(4), v(5))],
        )
        .unwrap();
        let bs = t.branches();
        assert_eq!(bs.len(), 3);
        let long = bs.iter().find(|b| b.leaf == v(5)).unwrap();
        assert_eq!(long.chain, vec![v(4)]);
        assert_eq!(long.anchor, v(1));
    }

    #[test]
    fn degree_sum_is_twice_edges() {
        let t = PlumbingTree::star(-2, &[2, -1, -1]);
        let total: usize = t.vertices().map(|v| t.degree(v).unwrap()).sum();
        assert_eq!(total, 2 * (t.vertex_count() - 1));
    }
}
