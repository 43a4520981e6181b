//! Neumann moves as certified rewrites.
//!
//! Five local moves (A+, A-, B+, B-, C), each in an expanding and a
//! contracting direction. Expansion reads the move bottom-up:
//!
//! * `expand A(e)` at an edge {x,y}: both endpoints gain `e`, a fresh
//!   vertex of weight `e` is inserted between them;
//! * `expand B(e)` at a vertex v: v gains `e` and sprouts a fresh leaf
//!   of weight `e`;
//! * `expand C` at a vertex of weight `w1+w2`: the vertex splits into
//!   `w1 -- 0 -- w2`, its other edges partitioned by the caller;
//! * contraction inverts each of these exactly.
//!
//! Every application is a value: it can be serialized to a one-line text
//! record and replayed later, so a sequence of moves is a checkable
//! certificate that two trees present the same manifold.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::tree::{PlumbingTree, VertexId};

/// Sign carried by the A and B moves.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveSign {
    Minus,
    Plus,
}

impl MoveSign {
    pub fn value(self) -> i64 {
        match self {
            MoveSign::Minus => -1,
            MoveSign::Plus => 1,
        }
    }
}

/// The move kind; C carries no sign.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    A(MoveSign),
    B(MoveSign),
    C,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveKind::A(MoveSign::Minus) => write!(f, "A-"),
            MoveKind::A(MoveSign::Plus) => write!(f, "A+"),
            MoveKind::B(MoveSign::Minus) => write!(f, "B-"),
            MoveKind::B(MoveSign::Plus) => write!(f, "B+"),
            MoveKind::C => write!(f, "C"),
        }
    }
}

impl MoveKind {
    pub fn parse(s: &str) -> Option<MoveKind> {
        match s {
            "A-" => Some(MoveKind::A(MoveSign::Minus)),
            "A+" => Some(MoveKind::A(MoveSign::Plus)),
            "B-" => Some(MoveKind::B(MoveSign::Minus)),
            "B+" => Some(MoveKind::B(MoveSign::Plus)),
            "C" => Some(MoveKind::C),
            _ => None,
        }
    }

    /// All five kinds in their canonical order.
    pub fn all() -> [MoveKind; 5] {
        [
            MoveKind::A(MoveSign::Minus),
            MoveKind::A(MoveSign::Plus),
            MoveKind::B(MoveSign::Minus),
            MoveKind::B(MoveSign::Plus),
            MoveKind::C,
        ]
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Expand,
    Contract,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Expand => write!(f, "expand"),
            Direction::Contract => write!(f, "contract"),
        }
    }
}

/// Where a move applies: a vertex, or an edge stored as (min, max).
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Site {
    Vertex(VertexId),
    Edge(VertexId, VertexId),
}

impl Site {
    pub fn edge(u: VertexId, v: VertexId) -> Site {
        if u <= v {
            Site::Edge(u, v)
        } else {
            Site::Edge(v, u)
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Vertex(v) => write!(f, "vertex {v}"),
            Site::Edge(u, v) => write!(f, "edge {u} {v}"),
        }
    }
}

/// Extra data a move needs beyond its site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveParams {
    /// Contract moves need nothing.
    None,
    /// Expand A/B mint one fresh vertex.
    Fresh(VertexId),
    /// Expand C: the weight split, the neighbors kept on the first split
    /// vertex, the fresh 0-vertex and the fresh second split vertex.
    SplitC {
        w1: i64,
        w2: i64,
        side1: BTreeSet<VertexId>,
        zero: VertexId,
        second: VertexId,
    },
}

/// A single move application, fully determined and replayable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveApplication {
    pub kind: MoveKind,
    pub direction: Direction,
    pub site: Site,
    pub params: MoveParams,
}

impl MoveApplication {
    pub fn expand_a(sign: MoveSign, u: VertexId, v: VertexId, fresh: VertexId) -> Self {
        MoveApplication {
            kind: MoveKind::A(sign),
            direction: Direction::Expand,
            site: Site::edge(u, v),
            params: MoveParams::Fresh(fresh),
        }
    }

    pub fn expand_b(sign: MoveSign, v: VertexId, fresh: VertexId) -> Self {
        MoveApplication {
            kind: MoveKind::B(sign),
            direction: Direction::Expand,
            site: Site::Vertex(v),
            params: MoveParams::Fresh(fresh),
        }
    }

    pub fn expand_c(
        v: VertexId,
        w1: i64,
        w2: i64,
        side1: BTreeSet<VertexId>,
        zero: VertexId,
        second: VertexId,
    ) -> Self {
        MoveApplication {
            kind: MoveKind::C,
            direction: Direction::Expand,
            site: Site::Vertex(v),
            params: MoveParams::SplitC {
                w1,
                w2,
                side1,
                zero,
                second,
            },
        }
    }

    pub fn contract(kind: MoveKind, v: VertexId) -> Self {
        MoveApplication {
            kind,
            direction: Direction::Contract,
            site: Site::Vertex(v),
            params: MoveParams::None,
        }
    }

    /// Signature delta of this application, direction-adjusted.
    pub fn signature_delta(&self) -> (i64, i64) {
        let (dp, dm) = expected_signature_delta(self.kind);
        match self.direction {
            Direction::Expand => (dp, dm),
            Direction::Contract => (-dp, -dm),
        }
    }
}

/// Signature deltas of the expanding moves: (A-) and (B-) each add one
/// negative eigenvalue, (A+) and (B+) one positive, (C) one of each.
/// Contraction negates both entries.
pub fn expected_signature_delta(kind: MoveKind) -> (i64, i64) {
    match kind {
        MoveKind::A(MoveSign::Minus) | MoveKind::B(MoveSign::Minus) => (0, 1),
        MoveKind::A(MoveSign::Plus) | MoveKind::B(MoveSign::Plus) => (1, 0),
        MoveKind::C => (1, 1),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("fresh id {0} is already in use")]
    StaleId(VertexId),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("replay failed at entry {index}: {cause}")]
pub struct ReplayError {
    pub index: usize,
    pub cause: MoveError,
}

/// All sites where the move's local pattern matches. Expand A/B/C sites
/// are unconditional (Expand C additionally needs a split supplied at
/// apply time); contract sites require the exact local pattern.
pub fn applicable_sites(tree: &PlumbingTree, kind: MoveKind, direction: Direction) -> Vec<Site> {
    match direction {
        Direction::Expand => match kind {
            MoveKind::A(_) => tree
                .edges()
                .into_iter()
                .map(|(u, v)| Site::Edge(u, v))
                .collect(),
            MoveKind::B(_) | MoveKind::C => tree.vertices().map(Site::Vertex).collect(),
        },
        Direction::Contract => match kind {
            MoveKind::A(sign) => tree
                .vertices()
                .filter(|&v| {
                    tree.degree(v) == Ok(2) && tree.weight(v) == Ok(sign.value())
                })
                .map(Site::Vertex)
                .collect(),
            MoveKind::B(sign) => tree
                .vertices()
                .filter(|&v| {
                    tree.degree(v) == Ok(1) && tree.weight(v) == Ok(sign.value())
                })
                .map(Site::Vertex)
                .collect(),
            MoveKind::C => tree
                .vertices()
                .filter(|&v| tree.degree(v) == Ok(2) && tree.weight(v) == Ok(0))
                .map(Site::Vertex)
                .collect(),
        },
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), MoveError> {
    if cond {
        Ok(())
    } else {
        Err(MoveError::PatternMismatch(msg()))
    }
}

fn fresh_ok(tree: &PlumbingTree, id: VertexId) -> Result<(), MoveError> {
    if tree.contains(id) {
        Err(MoveError::StaleId(id))
    } else {
        Ok(())
    }
}

/// Apply one move, returning the rewritten tree. Untouched vertices keep
/// their ids and weights.
pub fn apply(tree: &PlumbingTree, m: &MoveApplication) -> Result<PlumbingTree, MoveError> {
    match (m.direction, m.kind, m.site, &m.params) {
        (Direction::Expand, MoveKind::A(sign), Site::Edge(u, v), MoveParams::Fresh(fresh)) => {
            require(tree.has_edge(u, v), || format!("no edge ({u},{v})"))?;
            fresh_ok(tree, *fresh)?;
            let e = sign.value();
            let mut t = tree.clone();
            t.remove_edge(u, v);
            t.insert_vertex(*fresh, e);
            t.insert_edge(u, *fresh);
            t.insert_edge(*fresh, v);
            t.add_weight(u, e);
            t.add_weight(v, e);
            Ok(t)
        }
        (Direction::Expand, MoveKind::B(sign), Site::Vertex(v), MoveParams::Fresh(fresh)) => {
            require(tree.contains(v), || format!("no vertex {v}"))?;
            fresh_ok(tree, *fresh)?;
            let e = sign.value();
            let mut t = tree.clone();
            t.insert_vertex(*fresh, e);
            t.insert_edge(v, *fresh);
            t.add_weight(v, e);
            Ok(t)
        }
        (
            Direction::Expand,
            MoveKind::C,
            Site::Vertex(v),
            MoveParams::SplitC {
                w1,
                w2,
                side1,
                zero,
                second,
            },
        ) => {
            require(tree.contains(v), || format!("no vertex {v}"))?;
            require(tree.weight(v) == Ok(w1 + w2), || {
                format!(
                    "weight of {v} is {:?}, split {w1}+{w2} does not match",
                    tree.weight(v)
                )
            })?;
            let neighbors: BTreeSet<VertexId> = tree.neighbors(v).collect();
            require(side1.is_subset(&neighbors), || {
                format!("side1 contains non-neighbors of {v}")
            })?;
            fresh_ok(tree, *zero)?;
            fresh_ok(tree, *second)?;
            require(zero != second, || "fresh ids must differ".to_string())?;
            let mut t = tree.clone();
            t.set_weight(v, *w1);
            t.insert_vertex(*zero, 0);
            t.insert_vertex(*second, *w2);
            for &n in &neighbors {
                if !side1.contains(&n) {
                    t.remove_edge(v, n);
                    t.insert_edge(*second, n);
                }
            }
            t.insert_edge(v, *zero);
            t.insert_edge(*zero, *second);
            Ok(t)
        }
        (Direction::Contract, MoveKind::A(sign), Site::Vertex(v), MoveParams::None) => {
            require(tree.contains(v), || format!("no vertex {v}"))?;
            require(tree.degree(v) == Ok(2), || {
                format!("vertex {v} does not have degree 2")
            })?;
            require(tree.weight(v) == Ok(sign.value()), || {
                format!("vertex {v} does not have weight {}", sign.value())
            })?;
            let mut ns = tree.neighbors(v);
            let x = ns.next().expect("degree 2");
            let y = ns.next().expect("degree 2");
            let mut t = tree.clone();
            t.remove_vertex(v);
            t.insert_edge(x, y);
            t.add_weight(x, -sign.value());
            t.add_weight(y, -sign.value());
            Ok(t)
        }
        (Direction::Contract, MoveKind::B(sign), Site::Vertex(v), MoveParams::None) => {
            require(tree.contains(v), || format!("no vertex {v}"))?;
            require(tree.degree(v) == Ok(1), || {
                format!("vertex {v} is not a leaf")
            })?;
            require(tree.weight(v) == Ok(sign.value()), || {
                format!("vertex {v} does not have weight {}", sign.value())
            })?;
            let n = tree.neighbors(v).next().expect("degree 1");
            let mut t = tree.clone();
            t.remove_vertex(v);
            t.add_weight(n, -sign.value());
            Ok(t)
        }
        (Direction::Contract, MoveKind::C, Site::Vertex(v), MoveParams::None) => {
            require(tree.contains(v), || format!("no vertex {v}"))?;
            require(tree.degree(v) == Ok(2), || {
                format!("vertex {v} does not have degree 2")
            })?;
            require(tree.weight(v) == Ok(0), || {
                format!("vertex {v} does not have weight 0")
            })?;
            let mut ns = tree.neighbors(v);
            let x = ns.next().expect("degree 2");
            let y = ns.next().expect("degree 2");
            // merge y into x; x keeps its id and inherits y's edges
            let (keep, gone) = if x < y { (x, y) } else { (y, x) };
            let merged_weight = tree.weight(keep).unwrap() + tree.weight(gone).unwrap();
            let gone_neighbors: Vec<VertexId> =
                tree.neighbors(gone).filter(|&n| n != v).collect();
            let mut t = tree.clone();
            t.remove_vertex(v);
            t.remove_vertex(gone);
            t.set_weight(keep, merged_weight);
            for n in gone_neighbors {
                t.insert_edge(keep, n);
            }
            Ok(t)
        }
        _ => Err(MoveError::PatternMismatch(format!(
            "{} {} cannot apply at {} with the given parameters",
            m.direction, m.kind, m.site
        ))),
    }
}

/// Ordered, replayable sequence of move applications.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveLog {
    pub entries: Vec<MoveApplication>,
}

impl MoveLog {
    pub fn new(entries: Vec<MoveApplication>) -> Self {
        MoveLog { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, m: MoveApplication) {
        self.entries.push(m);
    }

    pub fn extend(&mut self, other: MoveLog) {
        self.entries.extend(other.entries);
    }

    /// One application per line, LF-terminated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.entries {
            out.push_str(&entry_to_line(m));
            out.push('\n');
        }
        out
    }

    /// Parse the text format produced by [`MoveLog::to_text`]. Unknown
    /// tokens are rejected.
    pub fn parse(text: &str) -> Result<MoveLog, LogParseError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            entries.push(parse_line(line).map_err(|msg| LogParseError {
                line: i + 1,
                msg,
            })?);
        }
        Ok(MoveLog { entries })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("move log line {line}: {msg}")]
pub struct LogParseError {
    pub line: usize,
    pub msg: String,
}

fn entry_to_line(m: &MoveApplication) -> String {
    match (m.direction, &m.site, &m.params) {
        (Direction::Expand, Site::Edge(u, v), MoveParams::Fresh(f)) => {
            format!("expand {} edge {u} {v} new {f}", m.kind)
        }
        (Direction::Expand, Site::Vertex(v), MoveParams::Fresh(f)) => {
            format!("expand {} vertex {v} new {f}", m.kind)
        }
        (
            Direction::Expand,
            Site::Vertex(v),
            MoveParams::SplitC {
                w1,
                w2,
                side1,
                zero,
                second,
            },
        ) => {
            let side = if side1.is_empty() {
                "-".to_string()
            } else {
                side1
                    .iter()
                    .map(|id| id.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            format!(
                "expand C vertex {v} w1 {w1} w2 {w2} side1 {side} new1 {zero} new2 {second}"
            )
        }
        (Direction::Contract, Site::Vertex(v), MoveParams::None) => {
            format!("contract {} vertex {v}", m.kind)
        }
        _ => unreachable!("move applications are constructed well-formed"),
    }
}

fn parse_line(line: &str) -> Result<MoveApplication, String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let mut it = tokens.iter().copied();
    let mut next = |what: &str| -> Result<&str, String> {
        it.next().ok_or_else(|| format!("missing {what}"))
    };
    let expect = |tok: &str, want: &str| -> Result<(), String> {
        if tok == want {
            Ok(())
        } else {
            Err(format!("expected `{want}`, found `{tok}`"))
        }
    };
    fn parse_id(s: &str) -> Result<VertexId, String> {
        s.parse::<u64>()
            .map(VertexId)
            .map_err(|_| format!("bad vertex id `{s}`"))
    }
    fn parse_int(s: &str) -> Result<i64, String> {
        s.parse::<i64>().map_err(|_| format!("bad integer `{s}`"))
    }

    let dir = next("direction")?;
    let kind = MoveKind::parse(next("move kind")?).ok_or("bad move kind")?;
    match dir {
        "expand" => match kind {
            MoveKind::A(sign) => {
                expect(next("`edge`")?, "edge")?;
                let u = parse_id(next("edge endpoint")?)?;
                let v = parse_id(next("edge endpoint")?)?;
                expect(next("`new`")?, "new")?;
                let f = parse_id(next("fresh id")?)?;
                if it.next().is_some() {
                    return Err("trailing tokens".into());
                }
                Ok(MoveApplication::expand_a(sign, u, v, f))
            }
            MoveKind::B(sign) => {
                expect(next("`vertex`")?, "vertex")?;
                let v = parse_id(next("vertex id")?)?;
                expect(next("`new`")?, "new")?;
                let f = parse_id(next("fresh id")?)?;
                if it.next().is_some() {
                    return Err("trailing tokens".into());
                }
                Ok(MoveApplication::expand_b(sign, v, f))
            }
            MoveKind::C => {
                expect(next("`vertex`")?, "vertex")?;
                let v = parse_id(next("vertex id")?)?;
                expect(next("`w1`")?, "w1")?;
                let w1 = parse_int(next("w1 value")?)?;
                expect(next("`w2`")?, "w2")?;
                let w2 = parse_int(next("w2 value")?)?;
                expect(next("`side1`")?, "side1")?;
                let side_tok = next("side1 ids")?;
                let side1: BTreeSet<VertexId> = if side_tok == "-" {
                    BTreeSet::new()
                } else {
                    side_tok
                        .split(',')
                        .map(parse_id)
                        .collect::<Result<_, _>>()?
                };
                expect(next("`new1`")?, "new1")?;
                let zero = parse_id(next("new1 id")?)?;
                expect(next("`new2`")?, "new2")?;
                let second = parse_id(next("new2 id")?)?;
                if it.next().is_some() {
                    return Err("trailing tokens".into());
                }
                Ok(MoveApplication::expand_c(v, w1, w2, side1, zero, second))
            }
        },
        "contract" => {
            expect(next("`vertex`")?, "vertex")?;
            let v = parse_id(next("vertex id")?)?;
            if it.next().is_some() {
                return Err("trailing tokens".into());
            }
            Ok(MoveApplication::contract(kind, v))
        }
        other => Err(format!("bad direction `{other}`")),
    }
}

/// Fold [`apply`] over a log, failing atomically at the first
/// inapplicable entry.
pub fn replay(tree: &PlumbingTree, log: &MoveLog) -> Result<PlumbingTree, ReplayError> {
    let mut current = tree.clone();
    for (index, m) in log.entries.iter().enumerate() {
        current = apply(&current, m).map_err(|cause| ReplayError { index, cause })?;
    }
    Ok(current)
}
