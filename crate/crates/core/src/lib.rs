//! Exact algorithms for NP-hard problems on intersection graphs of
//! similarly-sized balls and cubes, driven by weighted treedepth
//! decompositions of a clique-based quotient graph.

pub mod branching;
pub mod cutcount;
pub mod cycle_cover;
pub mod decomposition;
mod error;
pub mod exec;
pub mod geometry;
pub mod graph;
pub mod oracles;
pub mod problems;
pub mod seed;
pub mod stats;

pub use error::{Error, Result};
pub use exec::Exec;
pub use graph::Graph;
