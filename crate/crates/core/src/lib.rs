//! Certifying search for two edge-disjoint nested cycles without crossings.
//!
//! The pipeline passes a graph to an expander subgraph, builds a kraken (a
//! shortest cycle with two blob-anchored arms per cycle vertex), links
//! consecutive arms into an outer cycle around the inner one, and re-checks
//! the result with an independent verifier. A brute-force oracle decides the
//! property exhaustively on small graphs.

pub mod error;
pub mod graph;
pub mod rational;

pub mod assembler;
pub mod expander;
pub mod generate;
pub mod io;
pub mod kraken;
pub mod linker;
pub mod record;
pub mod verifier;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use graph::{Cycle, Graph, Path, Subgraph, VertexSet};
pub use rational::Rational;
