//! Realizability checking and controller synthesis for Separated GR(k)
//! games, via a reduction to symbolic weak Büchi games.
//!
//! Start with [`spec::parse_spec`] to load a game, [`grk::solve`] to decide
//! it and build a controller, and [`oracle`] for the explicit brute-force
//! cross-check. See the `examples/` directory for end-to-end usage.

pub mod adapters;
pub mod bench;
pub mod dd;
pub mod error;
pub mod formula;
pub mod graph;
pub mod grk;
pub mod ltl;
pub mod oracle;
pub mod solver;
pub mod spec;

pub use error::{Error, Result};
