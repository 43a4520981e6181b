//! Command-line surface for the plumbing-tree calculus: classification,
//! framing matrices, diagonalization, reduction, move replay, site
//! enumeration, random generation, DOT export and self-verification.
//!
//! Exit codes: 0 success, 1 domain error (singular or not weakly
//! negative definite input, exhausted fallback search, verification
//! mismatch), 2 usage or parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use plumbtree::diag::{default_root, diagonalize, DiagStep};
use plumbtree::gen::{generate, GenMode, GenParams};
use plumbtree::moves::{applicable_sites, replay, Direction, MoveKind, MoveLog};
use plumbtree::rational::fmt_rational;
use plumbtree::reduce::{classify, reduce, ReduceError, ReduceOptions};
use plumbtree::textio::{export_dot, parse_tree_text, serialize_tree, verify_report, TreeDocument};
use plumbtree::tree::VertexId;

#[derive(Parser)]
#[command(name = "plumbtree", version, about = "Exact calculus for integer-weighted plumbing trees")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the definiteness class of a tree
    Check { file: PathBuf },
    /// Print the framing matrix (rows of space-separated rationals)
    Matrix { file: PathBuf },
    /// Diagonalize and print per-vertex values plus the signature
    Diag {
        file: PathBuf,
        /// Root vertex id (defaults to a vertex of maximal degree)
        #[arg(long)]
        root: Option<u64>,
        /// Also print the elimination steps
        #[arg(long)]
        trace: bool,
    },
    /// Reduce a weakly negative definite tree to a negative definite one
    Reduce {
        file: PathBuf,
        /// Write the move log to this file
        #[arg(long)]
        log: Option<PathBuf>,
        /// Write the reduced tree to this file (also printed to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Depth budget for the fallback search
        #[arg(long, default_value_t = 12)]
        fallback_depth: usize,
    },
    /// Replay a move log against a tree and print the result
    Apply {
        file: PathBuf,
        /// Move log file to replay
        #[arg(long)]
        log: PathBuf,
    },
    /// List the sites where a move applies
    Sites {
        file: PathBuf,
        /// Move kind: A-, A+, B-, B+ or C
        #[arg(long = "move")]
        kind: String,
        /// expand or contract
        #[arg(long)]
        direction: String,
    },
    /// Generate a random tree (deterministic per seed)
    Gen {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        seed: u64,
        /// arbitrary or nd-seed
        #[arg(long, default_value = "arbitrary")]
        mode: String,
        /// Number of random expanding moves (nd-seed mode)
        #[arg(long, default_value_t = 0)]
        expansions: usize,
        #[arg(long, default_value_t = -5, allow_hyphen_values = true)]
        weight_low: i64,
        #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
        weight_high: i64,
    },
    /// Export the tree as a DOT graph
    Dot { file: PathBuf },
    /// Cross-check the combinatorial signature against the dense oracle
    Verify { file: PathBuf },
}

enum CliError {
    /// Parse or usage problems: exit code 2.
    Usage(String),
    /// Domain failures on valid input: exit code 1.
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

fn load_tree(path: &Path) -> Result<TreeDocument, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_tree_text(&text, path.display().to_string())
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Check { file } => {
            let doc = load_tree(&file)?;
            println!("{}", classify(&doc.tree));
            Ok(())
        }
        Cmd::Matrix { file } => {
            let doc = load_tree(&file)?;
            print!("{}", doc.tree.framing_matrix());
            Ok(())
        }
        Cmd::Diag { file, root, trace } => {
            let doc = load_tree(&file)?;
            let root = match root {
                Some(id) => VertexId(id),
                None => default_root(&doc.tree),
            };
            let res = diagonalize(&doc.tree, root)
                .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            for (v, value) in &res.values {
                println!("{v} -> {}", fmt_rational(value));
            }
            if trace {
                for step in &res.trace {
                    match step {
                        DiagStep::Case1 {
                            parent,
                            folded_leaves,
                        } => println!("case1 parent {parent} folds {}", join_ids(folded_leaves)),
                        DiagStep::Case2 {
                            parent,
                            zero_leaf,
                            detached_siblings,
                        } => println!(
                            "case2 parent {parent} zero {zero_leaf} siblings {}",
                            join_ids(detached_siblings)
                        ),
                    }
                }
            }
            println!("signature {}", res.signature);
            Ok(())
        }
        Cmd::Reduce {
            file,
            log,
            out,
            fallback_depth,
        } => {
            let doc = load_tree(&file)?;
            let report = reduce(&doc.tree, ReduceOptions { fallback_depth }).map_err(|e| {
                match e {
                    ReduceError::Singular
                    | ReduceError::NotWeaklyND
                    | ReduceError::WeakNDViolated(_)
                    | ReduceError::FallbackExhausted(_) => CliError::Domain(e.to_string()),
                    other => CliError::Usage(other.to_string()),
                }
            })?;
            for round in &report.rounds {
                eprintln!(
                    "round eliminate {} sig {} -> {}",
                    round.eliminated, round.before, round.after
                );
            }
            eprintln!(
                "moves {} rounds {} fallback {}",
                report.log.len(),
                report.rounds.len(),
                report.used_fallback
            );
            let tree_text = serialize_tree(&report.output);
            print!("{tree_text}");
            if let Some(path) = out {
                write_file(&path, &tree_text)?;
            }
            if let Some(path) = log {
                write_file(&path, &report.log.to_text())?;
            }
            Ok(())
        }
        Cmd::Apply { file, log } => {
            let doc = load_tree(&file)?;
            let log_text = fs::read_to_string(&log)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", log.display())))?;
            let parsed = MoveLog::parse(&log_text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", log.display())))?;
            let out = replay(&doc.tree, &parsed)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            print!("{}", serialize_tree(&out));
            Ok(())
        }
        Cmd::Sites {
            file,
            kind,
            direction,
        } => {
            let doc = load_tree(&file)?;
            let kind = MoveKind::parse(&kind)
                .ok_or_else(|| CliError::Usage(format!("bad move kind `{kind}`")))?;
            let direction = match direction.as_str() {
                "expand" => Direction::Expand,
                "contract" => Direction::Contract,
                other => return Err(CliError::Usage(format!("bad direction `{other}`"))),
            };
            for site in applicable_sites(&doc.tree, kind, direction) {
                println!("{site}");
            }
            Ok(())
        }
        Cmd::Gen {
            vertices,
            seed,
            mode,
            expansions,
            weight_low,
            weight_high,
        } => {
            let mode = match mode.as_str() {
                "arbitrary" => GenMode::Arbitrary,
                "nd-seed" => GenMode::NdSeedPlusExpansions,
                other => return Err(CliError::Usage(format!("bad mode `{other}`"))),
            };
            let params = GenParams {
                vertices,
                weight_low,
                weight_high,
                expansions,
                seed,
                mode,
            };
            let tree = generate(&params).map_err(|e| CliError::Usage(e.to_string()))?;
            print!("{}", serialize_tree(&tree));
            Ok(())
        }
        Cmd::Dot { file } => {
            let doc = load_tree(&file)?;
            print!("{}", export_dot(&doc.tree));
            Ok(())
        }
        Cmd::Verify { file } => {
            let doc = load_tree(&file)?;
            let (line, ok) = verify_report(&doc.tree);
            println!("{line}");
            if ok {
                Ok(())
            } else {
                Err(CliError::Domain("verification mismatch".into()))
            }
        }
    }
}

fn join_ids(ids: &[VertexId]) -> String {
    if ids.is_empty() {
        "-".to_string()
    } else {
        ids.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
