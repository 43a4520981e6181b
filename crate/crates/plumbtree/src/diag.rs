//! Combinatorial diagonalization of framing matrices.
//!
//! Orient all edges toward a root, then repeatedly eliminate edges at a
//! parent whose children are all childless: fold nonzero leaf weights
//! into the parent (case 1), or resolve a zero-weight leaf as a
//! hyperbolic pair (case 2). Both steps are exact congruences of the
//! framing matrix, so the signs of the resulting per-vertex values give
//! its inertia and their product gives its determinant.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::Zero;
use thiserror::Error;

use crate::matrix::Signature;
use crate::rational::{rat, sign_of, Rational};
use crate::tree::{PlumbingTree, TreeError, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {0} has no children to fold")]
    NoChildren(VertexId),
    #[error("child {0} of {1} still has children of its own")]
    ParentHasNonLeafChildren(VertexId, VertexId),
    #[error("child {0} of {1} has weight 0, case 2 is required")]
    ZeroLeafPresent(VertexId, VertexId),
    #[error("vertex {0} is not a zero-weight childless child of {1}")]
    NotZeroLeaf(VertexId, VertexId),
}

impl From<TreeError> for DiagError {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::UnknownVertex(v) => DiagError::UnknownVertex(v),
            other => panic!("unexpected tree error during diagonalization: {other}"),
        }
    }
}

/// A tree with all edges oriented toward a chosen root.
#[derive(Clone, Debug)]
pub struct OrientedTree {
    pub tree: PlumbingTree,
    pub root: VertexId,
    /// Parent of every non-root vertex.
    pub parent: BTreeMap<VertexId, VertexId>,
}

/// Orient all edges toward `root` by breadth-first traversal.
pub fn orient(tree: &PlumbingTree, root: VertexId) -> Result<OrientedTree, DiagError> {
    if !tree.contains(root) {
        return Err(DiagError::UnknownVertex(root));
    }
    let mut parent = BTreeMap::new();
    let mut seen: BTreeSet<VertexId> = [root].into_iter().collect();
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for n in tree.neighbors(v) {
            if seen.insert(n) {
                parent.insert(n, v);
                queue.push_back(n);
            }
        }
    }
    Ok(OrientedTree {
        tree: tree.clone(),
        root,
        parent,
    })
}

/// One recorded elimination step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagStep {
    Case1 {
        parent: VertexId,
        folded_leaves: Vec<VertexId>,
    },
    Case2 {
        parent: VertexId,
        zero_leaf: VertexId,
        detached_siblings: Vec<VertexId>,
    },
}

/// Result of a full diagonalization run.
#[derive(Clone, Debug)]
pub struct DiagResult {
    /// Final rational value of every original vertex.
    pub values: BTreeMap<VertexId, Rational>,
    /// Vertices in the order their values were finalized
    /// (farthest from the root first).
    pub order: Vec<VertexId>,
    pub trace: Vec<DiagStep>,
    /// Sign counts of the values.
    pub signature: Signature,
}

impl DiagResult {
    /// Exact product of all values; equals the framing determinant.
    pub fn value_product(&self) -> Rational {
        self.values.values().product()
    }
}

/// Mid-run state of the elimination: current weights of live vertices,
/// the shrinking child sets, and the finalized values.
#[derive(Clone, Debug)]
pub struct DiagState {
    parent: BTreeMap<VertexId, VertexId>,
    children: BTreeMap<VertexId, BTreeSet<VertexId>>,
    weights: BTreeMap<VertexId, Rational>,
    finalized: BTreeMap<VertexId, Rational>,
    order: Vec<VertexId>,
    trace: Vec<DiagStep>,
}

impl DiagState {
    pub fn new(tree: &PlumbingTree, root: VertexId) -> Result<Self, DiagError> {
        let oriented = orient(tree, root)?;
        let mut children: BTreeMap<VertexId, BTreeSet<VertexId>> =
            tree.vertices().map(|v| (v, BTreeSet::new())).collect();
        for (&child, &par) in &oriented.parent {
            children.get_mut(&par).expect("parent exists").insert(child);
        }
        let weights = tree
            .vertices()
            .map(|v| (v, rat(tree.weight(v).expect("vertex exists"))))
            .collect();
        Ok(DiagState {
            parent: oriented.parent,
            children,
            weights,
            finalized: BTreeMap::new(),
            order: Vec::new(),
            trace: Vec::new(),
        })
    }

    pub fn children_of(&self, v: VertexId) -> Option<&BTreeSet<VertexId>> {
        self.children.get(&v)
    }

    /// Current working weight of a not-yet-finalized vertex.
    pub fn current_weight(&self, v: VertexId) -> Option<&Rational> {
        self.weights.get(&v)
    }

    fn finalize(&mut self, v: VertexId, value: Rational) {
        self.finalized.insert(v, value);
        self.order.push(v);
    }

    fn check_children_ready(&self, parent: VertexId) -> Result<Vec<VertexId>, DiagError> {
        let children = self
            .children
            .get(&parent)
            .ok_or(DiagError::UnknownVertex(parent))?;
        if children.is_empty() {
            return Err(DiagError::NoChildren(parent));
        }
        for &c in children {
            if !self.children[&c].is_empty() {
                return Err(DiagError::ParentHasNonLeafChildren(c, parent));
            }
        }
        Ok(children.iter().copied().collect())
    }

    /// Case 1: every child of `parent` is childless with nonzero weight.
    /// The children detach with their current weights as final values and
    /// the parent's weight becomes `e_j - sum(1/e_i)`.
    pub fn fold_case1(&mut self, parent: VertexId) -> Result<(), DiagError> {
        let children = self.check_children_ready(parent)?;
        for &c in &children {
            if self.weights[&c].is_zero() {
                return Err(DiagError::ZeroLeafPresent(c, parent));
            }
        }
        let mut new_weight = self.weights[&parent].clone();
        for &c in &children {
            new_weight -= self.weights[&c].recip();
        }
        self.weights.insert(parent, new_weight);
        for &c in &children {
            let w = self.weights.remove(&c).expect("child weight");
            self.finalize(c, w);
        }
        self.children.get_mut(&parent).unwrap().clear();
        self.trace.push(DiagStep::Case1 {
            parent,
            folded_leaves: children,
        });
        Ok(())
    }

    /// Case 2: `zero_leaf` is a childless child of `parent` with current
    /// weight 0. The parent finalizes at -1, the zero leaf at +1, every
    /// sibling at its current weight, and all edges at the parent
    /// (including the one to its own parent) disappear.
    pub fn fold_case2(&mut self, parent: VertexId, zero_leaf: VertexId) -> Result<(), DiagError> {
        let children = self.check_children_ready(parent)?;
        if !children.contains(&zero_leaf) || !self.weights[&zero_leaf].is_zero() {
            return Err(DiagError::NotZeroLeaf(zero_leaf, parent));
        }
        let siblings: Vec<VertexId> = children.iter().copied().filter(|&c| c != zero_leaf).collect();
        for &s in &siblings {
            let w = self.weights.remove(&s).expect("sibling weight");
            self.finalize(s, w);
        }
        self.weights.remove(&zero_leaf);
        self.finalize(zero_leaf, rat(1));
        self.weights.remove(&parent);
        self.finalize(parent, rat(-1));
        self.children.get_mut(&parent).unwrap().clear();
        if let Some(&grand) = self.parent.get(&parent) {
            self.children.get_mut(&grand).unwrap().remove(&parent);
        }
        self.trace.push(DiagStep::Case2 {
            parent,
            zero_leaf,
            detached_siblings: siblings,
        });
        Ok(())
    }

    /// Finish: finalize whatever is still live (at most the root) and
    /// assemble the result.
    pub fn into_result(mut self) -> DiagResult {
        let live: Vec<VertexId> = self.weights.keys().copied().collect();
        for v in live {
            let w = self.weights.remove(&v).expect("live weight");
            self.finalize(v, w);
        }
        let mut signature = Signature::new(0, 0, 0);
        for v in self.finalized.values() {
            match sign_of(v) {
                1 => signature.n_plus += 1,
                -1 => signature.n_minus += 1,
                _ => signature.n_zero += 1,
            }
        }
        DiagResult {
            values: self.finalized,
            order: self.order,
            trace: self.trace,
            signature,
        }
    }
}

/// Post-order vertex sequence with children visited in ascending id.
fn post_order(state: &DiagState, root: VertexId) -> Vec<VertexId> {
    let mut out = Vec::new();
    let mut stack = vec![(root, false)];
    while let Some((v, expanded)) = stack.pop() {
        if expanded {
            out.push(v);
        } else {
            stack.push((v, true));
            // descending push so ascending-id children pop first
            for &c in state.children[&v].iter().rev() {
                stack.push((c, false));
            }
        }
    }
    out
}

/// Run the full elimination from `root`: process vertices in post-order,
/// applying case 2 whenever a zero-weight child is present (smallest id
/// first) and case 1 otherwise, until no edges remain.
pub fn diagonalize(tree: &PlumbingTree, root: VertexId) -> Result<DiagResult, DiagError> {
    let mut state = DiagState::new(tree, root)?;
    let schedule = post_order(&state, root);
    for v in schedule {
        let children = match state.children_of(v) {
            Some(c) if !c.is_empty() => c,
            _ => continue,
        };
        let zero_child = children
            .iter()
            .copied()
            .find(|c| state.current_weight(*c).is_some_and(|w| w.is_zero()));
        match zero_child {
            Some(z) => state.fold_case2(v, z)?,
            None => state.fold_case1(v)?,
        }
    }
    Ok(state.into_result())
}

/// Default root for signature computations: a vertex of maximal degree,
/// ties broken by smallest id.
pub fn default_root(tree: &PlumbingTree) -> VertexId {
    tree.vertices()
        .max_by_key(|&v| (tree.degree(v).expect("vertex exists"), std::cmp::Reverse(v)))
        .expect("tree is nonempty")
}

/// Signature of the framing matrix read off combinatorially. Agrees with
/// [`SymMatrix::signature`](crate::matrix::SymMatrix::signature) of the
/// framing matrix for every tree and any root.
pub fn signature_of_tree(tree: &PlumbingTree) -> Signature {
    diagonalize(tree, default_root(tree))
        .expect("default root is in the tree")
        .signature
}
