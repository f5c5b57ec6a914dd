//! Network dynamics on digraphs: Laplacian consensus flows, heterogeneous
//! differential-algebraic networks, two-level agent/group systems and the
//! spanning-tree characterization of equilibrium-set dimension for flows with
//! signed or negative edge weights.
//!
//! The crate is `no_std` and only needs `alloc`. Enable the `std` feature to
//! get `std::error::Error` on [`Error`].

#![cfg_attr(not(feature = "std"), no_std)]
// Index loops mirror the matrix formulas; negated comparisons also reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod dae;
pub mod equilibria;
mod error;
pub mod flows;
pub mod graph;
pub mod linalg;
pub mod multilevel;
pub mod sim;

pub use error::{Error, Result};
pub use graph::{Digraph, Sign, SignedDigraph, SpanningTree, TwoLevelNetwork, WeightedDigraph};
pub use linalg::{DenseMatrix, Rational};

/// Default cap on the number of spanning trees that enumeration will produce.
pub const DEFAULT_TREE_CAP: u128 = 1_000_000;
