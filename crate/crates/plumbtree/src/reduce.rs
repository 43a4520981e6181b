//! Reduction of weakly negative definite trees to negative definite
//! ones.
//!
//! Each round diagonalizes toward a deterministic root, takes the first
//! positive value (farthest from the root), and removes it: positive
//! leaves are ground down by `expand A-` steps and swallowed by a
//! `contract B+`, positive interior vertices by `expand A-` steps and a
//! `contract A+`, weight-0 interior positives by a single `contract C`.
//! Configurations those formulas do not cover (interior weight <= -1,
//! single-vertex trees, zero-weight leaves) go to a bounded certified
//! search that finds any move sequence strictly decreasing the positive
//! eigenvalue count. Every round loses at least one positive eigenvalue,
//! so the loop ends after at most `n_plus` rounds with an explicit,
//! replayable move log.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::diag::{diagonalize, signature_of_tree};
use crate::matrix::Signature;
use crate::moves::{apply, MoveApplication, MoveKind, MoveLog, MoveSign};
use crate::rational::Rational;
use crate::search::{iddfs, SearchConfig, Verdict};
use crate::tree::{PlumbingTree, VertexId};

/// Definiteness of a tree's framing matrix, strongest class first.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DefinitenessClass {
    NegativeDefinite,
    WeaklyNegativeDefinite,
    Singular,
    NotWeaklyNegativeDefinite,
}

impl fmt::Display for DefinitenessClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DefinitenessClass::NegativeDefinite => "NegativeDefinite",
            DefinitenessClass::WeaklyNegativeDefinite => "WeaklyNegativeDefinite",
            DefinitenessClass::Singular => "Singular",
            DefinitenessClass::NotWeaklyNegativeDefinite => "NotWeaklyNegativeDefinite",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("framing matrix is singular")]
    Singular,
    #[error("tree is not weakly negative definite")]
    NotWeaklyND,
    #[error("vertex {0} is not a positive leaf")]
    NotAPositiveLeaf(VertexId),
    #[error("cannot run the leaf elimination on a single-vertex tree")]
    SingleVertexTree,
    #[error("vertex {0} is not an interior vertex with a positive value")]
    NotInteriorPositive(VertexId),
    #[error("interior vertex {0} has weight {1} <= -1, the fallback search is required")]
    FallbackRequired(VertexId, i64),
    #[error("positive value at high-degree vertex {0} contradicts weak negative definiteness")]
    WeakNDViolated(VertexId),
    #[error("fallback search exhausted at depth {0}")]
    FallbackExhausted(usize),
}

/// Classify the definiteness of a tree.
///
/// Singular when `det B = 0`; negative definite by Sylvester's
/// criterion; otherwise weakly negative definite when the principal
/// submatrix of `B^{-1}` indexed by the degree->=3 vertices is negative
/// definite (vacuously so when no such vertex exists).
pub fn classify(tree: &PlumbingTree) -> DefinitenessClass {
    use num::Zero;
    let b = tree.framing_matrix();
    if b.determinant().is_zero() {
        return DefinitenessClass::Singular;
    }
    if b.is_negative_definite() {
        return DefinitenessClass::NegativeDefinite;
    }
    let high = tree.degree_classes().high_degree;
    if high.is_empty() {
        return DefinitenessClass::WeaklyNegativeDefinite;
    }
    let order: Vec<VertexId> = tree.vertices().collect();
    let indices: Vec<usize> = order
        .iter()
        .enumerate()
        .filter(|(_, v)| high.contains(v))
        .map(|(i, _)| i)
        .collect();
    let inv = b.inverse().expect("determinant is nonzero");
    if inv.principal_submatrix(&indices).is_negative_definite() {
        DefinitenessClass::WeaklyNegativeDefinite
    } else {
        DefinitenessClass::NotWeaklyNegativeDefinite
    }
}

/// Root used by the reduction: the unique high-degree vertex when there
/// is exactly one, the smallest-id high-degree vertex when there are
/// several, the smallest-id vertex when there is none.
pub fn reduce_root(tree: &PlumbingTree) -> VertexId {
    let high = tree.degree_classes().high_degree;
    high.iter()
        .next()
        .copied()
        .unwrap_or_else(|| tree.vertices().next().expect("tree is nonempty"))
}

/// Vertices whose diagonalization value is positive, farthest from the
/// root first.
pub fn positive_supports(
    tree: &PlumbingTree,
    root: VertexId,
) -> Result<Vec<(VertexId, Rational)>, crate::diag::DiagError> {
    use num::Signed;
    let res = diagonalize(tree, root)?;
    Ok(res
        .order
        .iter()
        .filter(|v| res.values[v].is_positive())
        .map(|v| (*v, res.values[v].clone()))
        .collect())
}

fn fresh_id(tree: &PlumbingTree) -> VertexId {
    VertexId(tree.max_id() + 1)
}

/// Eliminate a positive leaf of weight `m >= 1`: `expand A-` applied
/// `m - 1` times at the leaf's current edge grinds the weight down to 1,
/// then one `contract B+` removes it. Net signature change (-1, +m-1).
pub fn eliminate_at_leaf(
    tree: &PlumbingTree,
    leaf: VertexId,
) -> Result<(PlumbingTree, MoveLog), ReduceError> {
    if tree.vertex_count() == 1 {
        return Err(ReduceError::SingleVertexTree);
    }
    if tree.degree(leaf) != Ok(1) {
        return Err(ReduceError::NotAPositiveLeaf(leaf));
    }
    let m = tree.weight(leaf).expect("leaf exists");
    if m < 1 {
        return Err(ReduceError::NotAPositiveLeaf(leaf));
    }
    let mut current = tree.clone();
    let mut log = MoveLog::default();
    for _ in 0..(m - 1) {
        let neighbor = current.neighbors(leaf).next().expect("leaf has a neighbor");
        let m = MoveApplication::expand_a(MoveSign::Minus, leaf, neighbor, fresh_id(&current));
        current = apply(&current, &m).expect("expand A- applies at an edge");
        log.push(m);
    }
    let m = MoveApplication::contract(MoveKind::B(MoveSign::Plus), leaf);
    current = apply(&current, &m).expect("leaf has weight 1 now");
    log.push(m);
    Ok((current, log))
}

/// Scan predecessor of `v`: its child in the orientation toward the
/// reduce root (smallest-id child if `v` is the root itself).
fn scan_predecessor(tree: &PlumbingTree, v: VertexId) -> VertexId {
    let root = reduce_root(tree);
    let oriented = crate::diag::orient(tree, root).expect("root is in the tree");
    let parent = oriented.parent.get(&v).copied();
    tree.neighbors(v)
        .find(|&n| Some(n) != parent)
        .expect("degree-2 vertex has a child")
}

/// Eliminate a positive value at an interior (degree-2) vertex. The
/// caller is responsible for having found a positive diagonalization
/// value at `v` (see [`positive_supports`]).
///
/// Weight `m >= 1`: `expand A-` applied `m - 1` times at the edge toward
/// the scan predecessor, then one `contract A+`. Weight 0: a single
/// `contract C`; the merged vertex is re-examined next round. Weight
/// `<= -1` is out of reach of the move formulas and reported as
/// `FallbackRequired`.
pub fn eliminate_at_interior(
    tree: &PlumbingTree,
    v: VertexId,
) -> Result<(PlumbingTree, MoveLog), ReduceError> {
    if tree.degree(v) != Ok(2) {
        return Err(ReduceError::NotInteriorPositive(v));
    }
    let m = tree.weight(v).expect("vertex exists");
    if m <= -1 {
        return Err(ReduceError::FallbackRequired(v, m));
    }
    let mut current = tree.clone();
    let mut log = MoveLog::default();
    if m == 0 {
        let mv = MoveApplication::contract(MoveKind::C, v);
        current = apply(&current, &mv).expect("contract C applies at a 0-weight degree-2 vertex");
        log.push(mv);
        return Ok((current, log));
    }
    let mut pred = scan_predecessor(tree, v);
    for _ in 0..(m - 1) {
        let fresh = fresh_id(&current);
        let mv = MoveApplication::expand_a(MoveSign::Minus, v, pred, fresh);
        current = apply(&current, &mv).expect("expand A- applies at an edge");
        log.push(mv);
        pred = fresh;
    }
    let mv = MoveApplication::contract(MoveKind::A(MoveSign::Plus), v);
    current = apply(&current, &mv).expect("vertex has weight 1 and degree 2 now");
    log.push(mv);
    Ok((current, log))
}

/// One reduction round: which vertex was eliminated and the signatures
/// on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub eliminated: VertexId,
    pub before: Signature,
    pub after: Signature,
}

/// Outcome of a full reduction.
#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub input: PlumbingTree,
    pub output: PlumbingTree,
    pub log: MoveLog,
    pub rounds: Vec<Round>,
    pub used_fallback: bool,
}

#[derive(Copy, Clone, Debug)]
pub struct ReduceOptions {
    pub fallback_depth: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { fallback_depth: 12 }
    }
}

/// Search for any move sequence that strictly lowers the positive
/// eigenvalue count. Contract moves are tried first; expansions of A and
/// B are admitted for the detours the degenerate cases need.
fn fallback_search(
    tree: &PlumbingTree,
    n_plus_now: usize,
    depth: usize,
) -> Result<MoveLog, ReduceError> {
    let pinned = BTreeSet::new();
    let target = n_plus_now - 1;
    let judge = |t: &PlumbingTree, remaining: usize| -> Verdict {
        let n_plus = signature_of_tree(t).n_plus;
        if n_plus <= target {
            return Verdict::Goal;
        }
        // each move lowers n_plus by at most one
        if n_plus - target > remaining {
            return Verdict::Dead;
        }
        Verdict::Continue
    };
    let cfg = SearchConfig {
        max_depth: depth,
        vertex_cap: tree.vertex_count() + depth,
        pinned: &pinned,
        judge: &judge,
    };
    iddfs(tree, &cfg).ok_or(ReduceError::FallbackExhausted(depth))
}

/// Run the full reduction loop on a (weakly) negative definite tree.
pub fn reduce(tree: &PlumbingTree, opts: ReduceOptions) -> Result<ReductionReport, ReduceError> {
    match classify(tree) {
        DefinitenessClass::Singular => return Err(ReduceError::Singular),
        DefinitenessClass::NotWeaklyNegativeDefinite => return Err(ReduceError::NotWeaklyND),
        DefinitenessClass::NegativeDefinite | DefinitenessClass::WeaklyNegativeDefinite => {}
    }
    let mut current = tree.clone();
    let mut log = MoveLog::default();
    let mut rounds = Vec::new();
    let mut used_fallback = false;
    loop {
        use num::Signed;
        let root = reduce_root(&current);
        let res = diagonalize(&current, root).expect("root is in the tree");
        let before = res.signature;
        if before.n_plus == 0 {
            break;
        }
        // A positive value at a high-degree root contradicts weak
        // negative definiteness (the root's value is 1 over the matching
        // diagonal entry of the inverse), so it can only mean a bug or a
        // mid-run tree that left the class; diagnose the former.
        if current.degree(root).expect("root exists") >= 3 && res.values[&root].is_positive() {
            let class = classify(&current);
            if matches!(
                class,
                DefinitenessClass::NegativeDefinite | DefinitenessClass::WeaklyNegativeDefinite
            ) {
                return Err(ReduceError::WeakNDViolated(root));
            }
        }
        let supports = positive_supports(&current, root).expect("root is in the tree");
        // first handleable positive, farthest from the root first;
        // positives at high-degree vertices or at sites the move
        // formulas do not cover are left to the fallback search
        let mut chosen = None;
        if current.vertex_count() > 1 {
            for (x, _) in &supports {
                let degree = current.degree(*x).expect("vertex exists");
                let weight = current.weight(*x).expect("vertex exists");
                match degree {
                    1 if weight >= 1 => {
                        chosen = Some((*x, eliminate_at_leaf(&current, *x)?));
                        break;
                    }
                    2 if weight >= 0 => {
                        chosen = Some((*x, eliminate_at_interior(&current, *x)?));
                        break;
                    }
                    _ => continue,
                }
            }
        }

        let (target_vertex, (next, step_log)) = match chosen {
            Some(found) => found,
            None => {
                used_fallback = true;
                let target_vertex = supports.first().expect("n_plus > 0").0;
                let step_log = fallback_search(&current, before.n_plus, opts.fallback_depth)?;
                let next = crate::moves::replay(&current, &step_log).expect("search log replays");
                (target_vertex, (next, step_log))
            }
        };
        let after = signature_of_tree(&next);
        debug_assert!(after.n_plus < before.n_plus, "round must remove a positive");
        rounds.push(Round {
            eliminated: target_vertex,
            before,
            after,
        });
        log.extend(step_log);
        current = next;
    }
    Ok(ReductionReport {
        input: tree.clone(),
        output: current,
        log,
        rounds,
        used_fallback,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::replay;
    use crate::rational::rat;

    fn v(id: u64) -> VertexId {
        VertexId(id)
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&PlumbingTree::path(&[5, 0])),
            DefinitenessClass::WeaklyNegativeDefinite
        );
        assert_eq!(
            classify(&PlumbingTree::path(&[-2, -2, -2])),
            DefinitenessClass::NegativeDefinite
        );
        assert_eq!(
            classify(&PlumbingTree::star(2, &[-2, -2, -2])),
            DefinitenessClass::NotWeaklyNegativeDefinite
        );
        assert_eq!(
            classify(&PlumbingTree::path(&[1, 1])),
            DefinitenessClass::Singular
        );
        assert_eq!(
            classify(&PlumbingTree::star(-2, &[2, -1, -1])),
            DefinitenessClass::WeaklyNegativeDefinite
        );
    }

    #[test]
    fn positive_supports_examples() {
        let star = PlumbingTree::star(-2, &[2, -1, -1]);
        let sup = positive_supports(&star, v(1)).unwrap();
        assert_eq!(sup, vec![(v(2), rat(2))]);

        let t = PlumbingTree::path(&[5, 0]);
        let sup = positive_supports(&t, v(2)).unwrap();
        assert_eq!(sup, vec![(v(1), rat(5))]);

        let nd = PlumbingTree::path(&[-2, -2]);
        assert!(positive_supports(&nd, v(1)).unwrap().is_empty());
    }

    #[test]
    fn eliminate_at_leaf_grinds_positive_leaf() {
        let t = PlumbingTree::path(&[5, 0]);
        let (out, log) = eliminate_at_leaf(&t, v(1)).unwrap();
        assert_eq!(log.len(), 5);
        assert_eq!(signature_of_tree(&out), Signature::new(0, 5, 0));
        assert_eq!(replay(&t, &log).unwrap(), out);

        // weight-1 leaf: a single contract B+
        let t = PlumbingTree::path(&[1, -2]);
        let (out, log) = eliminate_at_leaf(&t, v(1)).unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(out.vertex_count(), 1);
        assert_eq!(out.weight(v(2)).unwrap(), -3);

        // negative leaf is rejected
        let t = PlumbingTree::path(&[-3, -2]);
        assert_eq!(
            eliminate_at_leaf(&t, v(1)).unwrap_err(),
            ReduceError::NotAPositiveLeaf(v(1))
        );
    }

    #[test]
    fn eliminate_at_interior_cases() {
        let t = PlumbingTree::path(&[-2, 3, -3]);
        let (out, log) = eliminate_at_interior(&t, v(2)).unwrap();
        assert_eq!(log.len(), 3);
        assert!(matches!(
            log.entries[0].kind,
            MoveKind::A(MoveSign::Minus)
        ));
        assert!(matches!(
            log.entries[1].kind,
            MoveKind::A(MoveSign::Minus)
        ));
        assert_eq!(
            log.entries[2],
            MoveApplication::contract(MoveKind::A(MoveSign::Plus), v(2))
        );
        assert_eq!(signature_of_tree(&out), Signature::new(0, 4, 0));

        // interior weight of exactly 1: no expansions, one contract A+
        let t = PlumbingTree::path(&[-2, 1, -2]);
        let (out, log) = eliminate_at_interior(&t, v(2)).unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(
            log.entries[0],
            MoveApplication::contract(MoveKind::A(MoveSign::Plus), v(2))
        );
        assert_eq!(out.weight(v(1)).unwrap(), -3);
        assert_eq!(out.weight(v(3)).unwrap(), -3);
        assert!(out.has_edge(v(1), v(3)));

        // interior 0-weight positive: contract C merges the neighbors
        let t = PlumbingTree::path(&[-2, 0, 3]);
        let (out, log) = eliminate_at_interior(&t, v(2)).unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(out.vertex_count(), 1);
        let r = out.vertices().next().unwrap();
        assert_eq!(out.weight(r).unwrap(), 1);

        // interior weight <= -1 signals the fallback
        let t = PlumbingTree::path(&[-2, -1, -1]);
        assert_eq!(
            eliminate_at_interior(&t, v(2)).unwrap_err(),
            ReduceError::FallbackRequired(v(2), -1)
        );
    }

    #[test]
    fn reduce_star_example() {
        let star = PlumbingTree::star(-2, &[2, -1, -1]);
        let report = reduce(&star, ReduceOptions::default()).unwrap();
        assert!(!report.used_fallback);
        assert_eq!(report.log.len(), 2);
        assert_eq!(report.rounds.len(), 1);
        assert_eq!(report.rounds[0].before, Signature::new(1, 3, 0));
        assert_eq!(report.rounds[0].after, Signature::new(0, 4, 0));
        assert_eq!(classify(&report.output), DefinitenessClass::NegativeDefinite);
        assert_eq!(replay(&star, &report.log).unwrap(), report.output);
        // star(-3; -2, -1, -1): center -3 with a fresh -2 neighbor
        assert_eq!(report.output.weight(v(1)).unwrap(), -3);
        assert_eq!(report.output.weight(v(3)).unwrap(), -1);
        assert_eq!(report.output.weight(v(4)).unwrap(), -1);
        assert_eq!(report.output.weight(v(5)).unwrap(), -2);
        assert!(report.output.has_edge(v(1), v(5)));
    }

    #[test]
    fn reduce_already_nd_is_empty() {
        let t = PlumbingTree::path(&[-2, -2]);
        let report = reduce(&t, ReduceOptions::default()).unwrap();
        assert!(report.log.is_empty());
        assert!(report.rounds.is_empty());
        assert_eq!(report.output, t);
    }

    #[test]
    fn reduce_rejects_bad_inputs() {
        assert_eq!(
            reduce(&PlumbingTree::path(&[1, 1]), ReduceOptions::default()).unwrap_err(),
            ReduceError::Singular
        );
        assert_eq!(
            reduce(
                &PlumbingTree::star(2, &[-2, -2, -2]),
                ReduceOptions::default()
            )
            .unwrap_err(),
            ReduceError::NotWeaklyND
        );
    }

    #[test]
    fn reduce_path_5_0() {
        let t = PlumbingTree::path(&[5, 0]);
        let report = reduce(&t, ReduceOptions::default()).unwrap();
        assert_eq!(report.log.len(), 5);
        assert_eq!(report.rounds.len(), 1);
        assert_eq!(
            classify(&report.output),
            DefinitenessClass::NegativeDefinite
        );
        assert_eq!(signature_of_tree(&report.output), Signature::new(0, 5, 0));
        assert_eq!(replay(&t, &report.log).unwrap(), report.output);
        let mut weights: Vec<i64> = report
            .output
            .vertices()
            .map(|x| report.output.weight(x).unwrap())
            .collect();
        weights.sort_unstable();
        assert_eq!(weights, vec![-2, -2, -2, -2, -1]);
    }
}
