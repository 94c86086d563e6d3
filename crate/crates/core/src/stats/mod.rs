//! Monte Carlo layer: replicas, crossing probabilities, the search for the
//! critical rate on the square grid and cluster-size histograms.

mod bernoulli;
mod bisection;
mod crossing;
mod histogram;
mod replicas;

pub use bernoulli::{BernoulliEstimate, Z95};
pub use bisection::{estimate_alpha_c, AlphaCEstimate, AlphaSearch, SearchPoint};
pub use crossing::{
    crossing_curve, crossing_grid, estimate_crossing, estimate_crossing_prob, has_lr_crossing,
    write_crossing_csv, CrossingMode, CrossingPoint,
};
pub use histogram::{Bin, SizeCensus, SizeHistogram, Weighting};
pub use replicas::{map_replicas, run_replicas, ReplicaPlan, ReplicaVariant};
