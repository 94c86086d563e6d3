//! Exact and asymptotic quantities for PCF on rooted d-ary trees.

mod cluster;
mod pmf;
mod rescale;
mod star;
mod subtrees;

pub use cluster::{cluster_prob, ln_cluster_prob, TreeParams};
pub use pmf::{fit_tail_exponent, ln_root_cluster_prob, root_cluster_size_pmf, ClusterSizePmf, TailFit};
pub(crate) use pmf::{csv_err, least_squares};
pub use rescale::{critical_alpha, critical_time, meanfield_time, open_prob, percolation_time};
pub use star::{alpha_star, star_open_bound};
pub use subtrees::{count_subtrees, ln_count_subtrees, LnCount, SubtreeCount, EXACT_LIMIT};
