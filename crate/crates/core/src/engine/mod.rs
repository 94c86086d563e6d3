//! Event-driven PCF engine.
//!
//! All clocks are drawn up front and processed as one sorted event array.
//! Ties (probability zero in exact arithmetic) are broken by time, then
//! edges before vertices, then index.

mod clocks;
mod config;
mod forest;
mod sim;
mod tree_sampler;

pub use clocks::{ClockSet, ClockStream};
pub use config::Configuration;
pub use forest::ClusterForest;
pub use sim::{
    run_coupled, run_pcf, run_percolation, run_warm_pcf, write_trace, EventKind, Run, RunResult,
    Simulation, TraceEvent, Variant,
};
pub use tree_sampler::{TreeRootSample, TreeRootSampler};
