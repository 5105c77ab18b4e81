//! Approximating the b-bipartiteness ratio of weighted undirected graphs.
//!
//! The solver plays a cut-matching game on a doubled auxiliary graph: a
//! matrix multiplicative weights cut player proposes vertex sets, a max-flow
//! matching player either routes them (growing a certificate multigraph) or
//! returns a cut whose ratio is below the current guess. A geometric sweep
//! over the guess gives an `O(log n)` approximation, and a recursive driver
//! turns it into a max-cut heuristic. Brute-force oracles cover small
//! instances.

pub mod error;
pub mod flow;
pub mod game;
pub mod gen;
pub mod graph;
pub mod io;
pub mod maxcut;
pub mod oracle;
pub mod ratio;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{evaluate_beta, tripartition, Edge, SignVector, Tripartition, WeightedGraph};
pub use ratio::Ratio;
