//! Exact calculus for integer-weighted plumbing trees.
//!
//! A plumbing tree is a finite tree whose vertices carry integer weights
//! (Euler numbers). This crate computes its framing matrix and signature
//! with exact rational arithmetic, applies Neumann moves as certified
//! rewrites with replayable logs, and reduces weakly negative definite
//! trees to negative definite ones.
//!
//! The two signature pipelines are independent on purpose: the
//! combinatorial edge-elimination in [`diag`] and the dense congruence
//! reduction in [`matrix`] must always agree, and the test suites hold
//! them against each other.

pub mod canon;
pub mod contfrac;
pub mod diag;
pub mod gen;
pub mod matrix;
pub mod moves;
pub mod rational;
pub mod reduce;
pub mod textio;
pub mod tree;

mod search;

pub use matrix::{Signature, SymMatrix};
pub use rational::{ExtendedRational, Rational};
pub use tree::{Branch, PlumbingTree, VertexId};
