//! Percolation with constant freezing (PCF).
//!
//! Edges of a finite graph open at rate 1 and every cluster freezes at rate
//! `alpha`, independently of its size. Once frozen, a cluster never grows again.
//!
//! The crate is organised around a few layers:
//!
//! - [`graph`]: grids, truncated rooted d-ary trees and arbitrary finite graphs.
//! - [`engine`]: the event-driven simulator (PCF, warm PCF, pure percolation and
//!   shared-clock coupling across subgraphs).
//! - [`oracle`]: exact final distributions for tiny graphs via the embedded jump chain.
//! - [`tree`]: closed forms and quadratures for PCF on rooted d-ary trees.
//! - [`stats`]: replica orchestration, crossing probabilities, critical-rate
//!   bisection and cluster-size histograms.
//! - [`cli`]: the configuration and execution layer behind the `pcf` binary.
//!
//! Runnable walkthroughs live in `crates/core/examples/`.

pub mod cli;
pub mod engine;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod quad;
pub mod stats;
pub mod tree;

pub use engine::{
    run_coupled, run_pcf, run_percolation, run_warm_pcf, ClockSet, ClockStream, Configuration,
    RunResult, Simulation, Variant,
};
pub use error::{PcfError, Result};
pub use graph::{Graph, GraphKind, PriorityOrder, Subgraph};
