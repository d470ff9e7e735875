//! Finite combinatorics of big Ramsey theory on the Rado graph.
//!
//! Nodes are bit-packed binary sequences ([`node`]), trees carry designated
//! coding nodes ([`tree`]), and the Rado graph is coded by the tree of all
//! sequences with `c_n` at length `n` ([`rado`]). Strong similarity is decided
//! through canonical forms ([`similarity`]), which drive the big Ramsey degree
//! counts ([`degrees`]) and the extension, front and monochromatization
//! machinery ([`ramsey`]).

pub mod cli;
pub mod degrees;
pub mod error;
pub mod node;
pub mod rado;
pub mod ramsey;
pub mod similarity;
pub mod tree;

pub use error::{Error, Result};
pub use node::{level_set_cmp, max_depth, LevelSet, LexOrder, Node, MAX_DEPTH};
pub use rado::{build_sr, decode_graph, tree_of_subgraph, AdjacencyOracle, FiniteGraph};
pub use similarity::{are_strongly_similar, canonical_form, CanonicalForm, MarkedSet, SimKind};
pub use tree::{CodingTree, FiniteApprox};
