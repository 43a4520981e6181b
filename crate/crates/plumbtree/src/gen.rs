//! Seeded random tree generation for tests and the CLI.
//!
//! Two modes: `Arbitrary` draws a uniform random attachment tree with
//! i.i.d. weights, `NdSeedPlusExpansions` starts from a strictly
//! diagonally dominant (hence negative definite) seed tree and applies a
//! number of random expanding Neumann moves. Everything is deterministic
//! for a fixed seed.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::moves::{apply, MoveApplication, MoveSign};
use crate::tree::{PlumbingTree, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("bad generator parameters: {0}")]
    BadParams(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GenMode {
    Arbitrary,
    NdSeedPlusExpansions,
}

#[derive(Clone, Debug)]
pub struct GenParams {
    pub vertices: usize,
    pub weight_low: i64,
    pub weight_high: i64,
    pub expansions: usize,
    pub seed: u64,
    pub mode: GenMode,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            vertices: 6,
            weight_low: -5,
            weight_high: 5,
            expansions: 0,
            seed: 0,
            mode: GenMode::Arbitrary,
        }
    }
}

/// Random tree shape: vertex i attaches to a uniform earlier vertex.
fn random_shape(rng: &mut ChaCha8Rng, n: usize) -> Vec<(VertexId, VertexId)> {
    (2..=n as u64)
        .map(|i| {
            let parent = rng.gen_range(1..i);
            (VertexId(parent), VertexId(i))
        })
        .collect()
}

/// One random expanding move on the tree, uniform over all applicable
/// (kind, site) pairs; expand C draws its split weight from the
/// configured range and a uniform subset of neighbors for `side1`.
fn random_expansion(
    rng: &mut ChaCha8Rng,
    tree: &PlumbingTree,
    params: &GenParams,
) -> MoveApplication {
    enum Choice {
        A(MoveSign, VertexId, VertexId),
        B(MoveSign, VertexId),
        C(VertexId),
    }
    let mut choices = Vec::new();
    for sign in [MoveSign::Minus, MoveSign::Plus] {
        for (u, v) in tree.edges() {
            choices.push(Choice::A(sign, u, v));
        }
        for v in tree.vertices() {
            choices.push(Choice::B(sign, v));
        }
    }
    for v in tree.vertices() {
        choices.push(Choice::C(v));
    }
    let fresh = VertexId(tree.max_id() + 1);
    match choices[rng.gen_range(0..choices.len())] {
        Choice::A(sign, u, v) => MoveApplication::expand_a(sign, u, v, fresh),
        Choice::B(sign, v) => MoveApplication::expand_b(sign, v, fresh),
        Choice::C(v) => {
            let w = tree.weight(v).expect("vertex exists");
            let w1 = rng.gen_range(params.weight_low..=params.weight_high);
            let side1: BTreeSet<VertexId> = tree
                .neighbors(v)
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let second = VertexId(tree.max_id() + 2);
            MoveApplication::expand_c(v, w1, w - w1, side1, fresh, second)
        }
    }
}

/// Generate a tree, deterministically for a fixed seed.
pub fn generate(params: &GenParams) -> Result<PlumbingTree, GenError> {
    if params.vertices == 0 {
        return Err(GenError::BadParams("vertex count must be >= 1".into()));
    }
    if params.weight_low > params.weight_high {
        return Err(GenError::BadParams(format!(
            "weight range [{}, {}] is empty",
            params.weight_low, params.weight_high
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let edges = random_shape(&mut rng, params.vertices);
    let mut degree: BTreeMap<VertexId, i64> =
        (1..=params.vertices as u64).map(|i| (VertexId(i), 0)).collect();
    for &(u, v) in &edges {
        *degree.get_mut(&u).unwrap() += 1;
        *degree.get_mut(&v).unwrap() += 1;
    }
    let weights: BTreeMap<VertexId, i64> = (1..=params.vertices as u64)
        .map(|i| {
            let v = VertexId(i);
            let w = rng.gen_range(params.weight_low..=params.weight_high);
            let w = match params.mode {
                GenMode::Arbitrary => w,
                // strict diagonal dominance forces negative definiteness
                GenMode::NdSeedPlusExpansions => w.min(-degree[&v] - 1),
            };
            (v, w)
        })
        .collect();
    let mut tree = PlumbingTree::build(weights, &edges).expect("generated shape is a tree");
    if params.mode == GenMode::NdSeedPlusExpansions {
        for _ in 0..params.expansions {
            let m = random_expansion(&mut rng, &tree, params);
            tree = apply(&tree, &m).expect("random expansion applies");
        }
    }
    Ok(tree)
}
