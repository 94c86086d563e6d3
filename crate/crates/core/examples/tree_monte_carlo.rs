//! Root-cluster frequencies from simulation on a depth-30 binary tree,
//! next to the exact values from quadrature.
//!
//! The tree has 2^31 - 1 vertices, so the root cluster is explored lazily
//! from the same clocks the full engine would use.

use pcf::engine::{ClockStream, TreeRootSampler};
use pcf::tree::{root_cluster_size_pmf, TreeParams};

fn main() -> pcf::Result<()> {
    let alpha: f64 = std::env::args().nth(1).map_or(1.0, |s| s.parse().expect("alpha"));
    let replicas = 200_000u64;
    let sampler = TreeRootSampler::new(2, 30, alpha, 1 << 16)?;
    let mut counts = [0u64; 7];
    let mut reached_leaves = 0;
    for stream in 0..replicas {
        let s = sampler.sample(&ClockStream::new(5, stream));
        match s.exact_size() {
            Some(k) if k <= 6 => counts[k as usize] += 1,
            Some(_) => {}
            None => reached_leaves += 1,
        }
    }
    let pmf = root_cluster_size_pmf(TreeParams::new(2, alpha)?, 6)?;
    println!("alpha={alpha}, {replicas} replicas, {reached_leaves} reached depth 30 or the size cap");
    for k in 1..=6u64 {
        let f = counts[k as usize] as f64 / replicas as f64;
        let se = (pmf.p(k) * (1.0 - pmf.p(k)) / replicas as f64).sqrt();
        println!("k={k}: simulated {f:.5}  exact {:.5}  z={:+.2}", pmf.p(k), (f - pmf.p(k)) / se);
    }
    Ok(())
}
