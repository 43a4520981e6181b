//! Tree file format, DOT export and the verification report.
//!
//! The file format is line-based and diffable: `vertex <id> <weight>`
//! and `edge <u> <v>` records, `#` comments, order-insensitive on input.
//! Serialization is canonical (vertices ascending, edges as (min,max)
//! lexicographic, LF endings), so outputs are byte-stable.

use std::fmt::Write as _;

use thiserror::Error;

use crate::diag::{default_root, diagonalize};
use crate::rational::fmt_rational;
use crate::tree::{PlumbingTree, TreeError, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A parsed tree together with the name of its source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDocument {
    pub tree: PlumbingTree,
    pub name: String,
}

/// Parse the tree file format. Structural validation is delegated to
/// [`PlumbingTree::build`].
pub fn parse_tree_text(text: &str, name: impl Into<String>) -> Result<TreeDocument, ParseError> {
    let mut weights = std::collections::BTreeMap::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |msg: String| ParseError::Syntax { line: i + 1, msg };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["vertex", id, weight] => {
                let id: u64 = id
                    .parse()
                    .map_err(|_| syntax(format!("bad vertex id `{id}`")))?;
                let weight: i64 = weight
                    .parse()
                    .map_err(|_| syntax(format!("bad weight `{weight}`")))?;
                if weights.insert(VertexId(id), weight).is_some() {
                    return Err(syntax(format!("vertex {id} declared twice")));
                }
            }
            ["edge", u, v] => {
                let u: u64 = u
                    .parse()
                    .map_err(|_| syntax(format!("bad vertex id `{u}`")))?;
                let v: u64 = v
                    .parse()
                    .map_err(|_| syntax(format!("bad vertex id `{v}`")))?;
                edges.push((VertexId(u), VertexId(v)));
            }
            _ => return Err(syntax(format!("unrecognized record `{line}`"))),
        }
    }
    let tree = PlumbingTree::build(weights, &edges)?;
    Ok(TreeDocument {
        tree,
        name: name.into(),
    })
}

/// Canonical serialization: vertices ascending, then edges (min,max)
/// lexicographic, one record per line, LF.
pub fn serialize_tree(tree: &PlumbingTree) -> String {
    let mut out = String::new();
    for v in tree.vertices() {
        writeln!(out, "vertex {} {}", v, tree.weight(v).expect("vertex exists")).unwrap();
    }
    for (u, v) in tree.edges() {
        writeln!(out, "edge {u} {v}").unwrap();
    }
    out
}

/// DOT export with `id:weight` labels, deterministically ordered.
pub fn export_dot(tree: &PlumbingTree) -> String {
    let mut out = String::from("graph tree {\n");
    for v in tree.vertices() {
        writeln!(
            out,
            "  {} [label=\"{}:{}\"];",
            v,
            v,
            tree.weight(v).expect("vertex exists")
        )
        .unwrap();
    }
    for (u, v) in tree.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Cross-check the combinatorial pipeline against the dense oracle:
/// signature against congruence signature, value product against the
/// determinant. Returns the report line and whether both pairs agree.
pub fn verify_report(tree: &PlumbingTree) -> (String, bool) {
    let res = diagonalize(tree, default_root(tree)).expect("default root is in the tree");
    let matrix = tree.framing_matrix();
    let oracle_sig = matrix.signature();
    let det = matrix.determinant();
    let product = res.value_product();
    let ok = res.signature == oracle_sig && det == product;
    let line = format!(
        "diag {} oracle {} det {} product {} {}",
        res.signature,
        oracle_sig,
        fmt_rational(&det),
        fmt_rational(&product),
        if ok { "OK" } else { "MISMATCH" }
    );
    (line, ok)
}
