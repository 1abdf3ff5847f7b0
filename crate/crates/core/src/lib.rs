//! Strong sign controllability (SSC) of undirected signed networks.
//!
//! - [`graph`]: the signed network model and neighbor sets.
//! - [`ssc`]: the subset-enumeration SSC test and SSC state nodes.
//! - [`components`]: component kinds, path/tree/cycle rules, chain decompositions.
//! - [`placement`]: minimum external input placement on chains.
//! - [`symbolic`]: exact Gramian and conservative symbolic rank.
//! - [`numeric`]: sampled Gramian ranks and counterexample search.
//! - [`io`]: documents, DOT export and run records.
//! - [`cli`]: the command surface used by the `sscnet` binary.

pub mod components;
pub mod fixtures;
pub mod graph;
pub mod ssc;
pub mod placement;
pub mod symbolic;
pub mod numeric;
pub mod io;
pub mod cli;
