//! Bounded iterative-deepening search over move space, shared by branch
//! contraction and the reducer's fallback. States are memoized on their
//! canonical weighted-tree encoding so isomorphic detours are pruned.

use std::collections::{BTreeSet, HashMap};

use crate::canon::canonical_key;
use crate::moves::{
    applicable_sites, apply, Direction, MoveApplication, MoveKind, MoveLog, MoveSign, Site,
};
use crate::tree::{PlumbingTree, VertexId};

pub(crate) enum Verdict {
    Goal,
    Dead,
    Continue,
}

pub(crate) struct SearchConfig<'a> {
    pub max_depth: usize,
    pub vertex_cap: usize,
    /// Vertices a move is never allowed to touch; also distinguishes
    /// them in the canonical keys.
    pub pinned: &'a BTreeSet<VertexId>,
    /// Judge a state given the remaining depth budget.
    pub judge: &'a dyn Fn(&PlumbingTree, usize) -> Verdict,
}

/// Candidate moves in deterministic order: contractions first (kind,
/// then ascending site), then expansions of A and B with both signs.
/// Expand C is not searched; its split parameter space is unbounded.
fn candidates(tree: &PlumbingTree) -> Vec<MoveApplication> {
    let mut out = Vec::new();
    for kind in MoveKind::all() {
        for site in applicable_sites(tree, kind, Direction::Contract) {
            if let Site::Vertex(v) = site {
                out.push(MoveApplication::contract(kind, v));
            }
        }
    }
    let fresh = VertexId(tree.max_id() + 1);
    for sign in [MoveSign::Minus, MoveSign::Plus] {
        for (u, v) in tree.edges() {
            out.push(MoveApplication::expand_a(sign, u, v, fresh));
        }
    }
    for sign in [MoveSign::Minus, MoveSign::Plus] {
        for v in tree.vertices() {
            out.push(MoveApplication::expand_b(sign, v, fresh));
        }
    }
    out
}

fn touches_pinned(tree: &PlumbingTree, m: &MoveApplication, pinned: &BTreeSet<VertexId>) -> bool {
    if pinned.is_empty() {
        return false;
    }
    match (m.direction, m.site) {
        (Direction::Expand, Site::Edge(u, v)) => pinned.contains(&u) || pinned.contains(&v),
        (Direction::Expand, Site::Vertex(v)) => pinned.contains(&v),
        (Direction::Contract, Site::Vertex(v)) => {
            pinned.contains(&v) || tree.neighbors(v).any(|n| pinned.contains(&n))
        }
        (Direction::Contract, Site::Edge(..)) => true,
    }
}

struct Dfs<'a> {
    cfg: &'a SearchConfig<'a>,
    memo: HashMap<String, usize>,
    path: Vec<MoveApplication>,
    path_keys: Vec<String>,
}

impl Dfs<'_> {
    fn run(&mut self, state: &PlumbingTree, remaining: usize) -> bool {
        match (self.cfg.judge)(state, remaining) {
            Verdict::Goal => return true,
            Verdict::Dead => return false,
            Verdict::Continue => {}
        }
        if remaining == 0 {
            return false;
        }
        let key = canonical_key(state, self.cfg.pinned);
        if self.path_keys.iter().any(|k| k == &key) {
            return false;
        }
        if self.memo.get(&key).is_some_and(|&r| r >= remaining) {
            return false;
        }
        self.path_keys.push(key);
        for m in candidates(state) {
            if touches_pinned(state, &m, self.cfg.pinned) {
                continue;
            }
            let child = match apply(state, &m) {
                Ok(t) => t,
                Err(_) => continue,
            };
            if child.vertex_count() > self.cfg.vertex_cap {
                continue;
            }
            self.path.push(m);
            if self.run(&child, remaining - 1) {
                return true;
            }
            self.path.pop();
        }
        let key = self.path_keys.pop().expect("pushed above");
        let entry = self.memo.entry(key).or_insert(0);
        *entry = (*entry).max(remaining);
        false
    }
}

/// Iterative deepening: try depth limits 0..=max_depth and return the
/// first (hence shortest, up to move ordering) certificate found.
pub(crate) fn iddfs(start: &PlumbingTree, cfg: &SearchConfig) -> Option<MoveLog> {
    let mut dfs = Dfs {
        cfg,
        memo: HashMap::new(),
        path: Vec::new(),
        path_keys: Vec::new(),
    };
    for depth in 0..=cfg.max_depth {
        dfs.path.clear();
        dfs.path_keys.clear();
        if dfs.run(start, depth) {
            return Some(MoveLog::new(dfs.path));
        }
    }
    None
}
