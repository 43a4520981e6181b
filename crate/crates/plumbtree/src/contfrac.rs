//! Negative continued fractions over the projectively extended
//! rationals, branch weight words, and certified branch contraction.
//!
//! The word of a branch is evaluated right to left with `x <- a - 1/x`;
//! the `1/0 = inf`, `a - 1/inf = a` conventions make evaluation total
//! and reproduce the `a_n = 0` truncation rule automatically. A branch
//! whose word value is an integer can be collapsed to a single vertex of
//! that weight by Neumann moves; `contract_branch` finds an explicit,
//! replayable move log for it by bounded search.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::moves::MoveLog;
use crate::rational::{rat, ExtendedRational};
use crate::search::{iddfs, SearchConfig, Verdict};
use crate::tree::{Branch, PlumbingTree, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContractError {
    #[error("not a branch of this tree: {0}")]
    NotABranch(String),
    #[error("branch is not contractible: continued fraction value is {0}")]
    NotContractible(ExtendedRational),
    #[error("no contraction certificate found within depth {0}")]
    SearchExhausted(usize),
}

/// Evaluate the negative continued fraction `[[a_0, ..., a_n]]` right to
/// left. Total: intermediate zeros become `inf` and drop back out.
pub fn eval_ncf(word: &[i64]) -> ExtendedRational {
    let mut it = word.iter().rev();
    let last = it.next().expect("word is nonempty");
    let mut acc = ExtendedRational::from_int(*last);
    for &a in it {
        acc = acc.ncf_step(&rat(a));
    }
    acc
}

/// Check that `b` denotes a hanging arm of `tree`: consecutive vertices
/// adjacent, chain vertices of degree 2, leaf of degree 1, and the
/// anchor either of degree >= 3 or an endpoint of a standalone path
/// (the whole tree is the branch).
fn validate_branch(tree: &PlumbingTree, b: &Branch) -> Result<(), ContractError> {
    let verts = b.vertices();
    let distinct: BTreeSet<VertexId> = verts.iter().copied().collect();
    if distinct.len() != verts.len() {
        return Err(ContractError::NotABranch("repeated vertex".into()));
    }
    for v in &verts {
        if !tree.contains(*v) {
            return Err(ContractError::NotABranch(format!("unknown vertex {v}")));
        }
    }
    for pair in verts.windows(2) {
        if !tree.has_edge(pair[0], pair[1]) {
            return Err(ContractError::NotABranch(format!(
                "vertices {} and {} are not adjacent",
                pair[0], pair[1]
            )));
        }
    }
    for c in &b.chain {
        if tree.degree(*c) != Ok(2) {
            return Err(ContractError::NotABranch(format!(
                "chain vertex {c} does not have degree 2"
            )));
        }
    }
    if tree.degree(b.leaf) != Ok(1) {
        return Err(ContractError::NotABranch(format!(
            "leaf {} does not have degree 1",
            b.leaf
        )));
    }
    let anchor_deg = tree.degree(b.anchor).expect("anchor exists");
    let standalone = distinct.len() == tree.vertex_count();
    if anchor_deg < 3 && !standalone {
        return Err(ContractError::NotABranch(format!(
            "anchor {} has degree {anchor_deg} and the branch does not cover the tree",
            b.anchor
        )));
    }
    Ok(())
}

/// Weight word of a branch from anchor to leaf, both endpoints included.
pub fn branch_word(tree: &PlumbingTree, b: &Branch) -> Result<Vec<i64>, ContractError> {
    validate_branch(tree, b)?;
    Ok(b.vertices()
        .into_iter()
        .map(|v| tree.weight(v).expect("vertex exists"))
        .collect())
}

/// Collapse a branch to a single vertex by a certified move sequence.
///
/// Requires the branch word to evaluate to a finite integer (otherwise
/// `NotContractible` without any search). The search works entirely
/// inside the branch: vertices outside it are pinned and no move may
/// change their weights or mutual edges. On success the remaining branch
/// vertex has the word value as its weight and carries the anchor's
/// outside edges.
pub fn contract_branch(
    tree: &PlumbingTree,
    b: &Branch,
    depth_limit: usize,
) -> Result<(PlumbingTree, MoveLog), ContractError> {
    let word = branch_word(tree, b)?;
    let value = eval_ncf(&word);
    let target: i64 = value
        .as_integer()
        .and_then(|n| i64::try_from(n).ok())
        .ok_or_else(|| ContractError::NotContractible(value.clone()))?;

    let branch_set: BTreeSet<VertexId> = b.vertices().into_iter().collect();
    let pinned: BTreeSet<VertexId> = tree
        .vertices()
        .filter(|v| !branch_set.contains(v))
        .collect();
    let outside_neighbors: BTreeSet<VertexId> = tree
        .neighbors(b.anchor)
        .filter(|n| pinned.contains(n))
        .collect();
    let outside_count = pinned.len();

    let judge = |t: &PlumbingTree, remaining: usize| -> Verdict {
        let active = t.vertex_count() - outside_count;
        if active == 1 {
            let r = t
                .vertices()
                .find(|v| !pinned.contains(v))
                .expect("one active vertex");
            let neighbors: BTreeSet<VertexId> = t.neighbors(r).collect();
            if t.weight(r) == Ok(target) && neighbors == outside_neighbors {
                return Verdict::Goal;
            }
        }
        // contracting k active vertices to 1 takes at least (k-1)/2 moves
        if active > 1 && (active - 1) > 2 * remaining {
            return Verdict::Dead;
        }
        Verdict::Continue
    };

    let cfg = SearchConfig {
        max_depth: depth_limit,
        vertex_cap: tree.vertex_count() + depth_limit,
        pinned: &pinned,
        judge: &judge,
    };
    match iddfs(tree, &cfg) {
        Some(log) => {
            let out = crate::moves::replay(tree, &log).expect("search log replays");
            Ok((out, log))
        }
        None => Err(ContractError::SearchExhausted(depth_limit)),
    }
}

/// Default search budget for branch contraction.
pub const DEFAULT_CONTRACT_DEPTH: usize = 12;
