//! Log-binned cluster sizes of final PCF configurations on a square grid.
//!
//! cargo run --release --example cluster_histogram -- [side] [alpha] [replicas]

use pcf::stats::{map_replicas, ReplicaPlan, SizeCensus, SizeHistogram, Weighting};
use pcf::Graph;

fn main() -> pcf::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let side: u32 = args.first().map_or(256, |s| s.parse().expect("side"));
    let alpha: f64 = args.get(1).map_or(0.55, |s| s.parse().expect("alpha"));
    let replicas: u64 = args.get(2).map_or(10, |s| s.parse().expect("replicas"));

    let grid = Graph::grid(side, side)?;
    let plan = ReplicaPlan::new(&grid, alpha, replicas, 2024);
    let start = std::time::Instant::now();
    let censuses = map_replicas(&plan, |_, r| SizeCensus::from_sizes(r.cluster_sizes))?;
    let mut census = SizeCensus::new();
    for c in &censuses {
        census.merge(c);
    }
    let hist = SizeHistogram::from_census(&census, 100)?;
    eprintln!(
        "{replicas} runs of {side}x{side} at alpha={alpha}: {:.2}s, {} clusters, {} bins",
        start.elapsed().as_secs_f64(),
        hist.total_clusters,
        hist.bins.len()
    );
    for (lo, hi) in [(1.0, 1e6), (10.0, 1e4), (10.0, 1e5)] {
        let c = hist.loglog_slope(Weighting::Clusters, lo, hi);
        let v = hist.loglog_slope(Weighting::Vertices, lo, hi);
        if let (Ok(c), Ok(v)) = (c, v) {
            eprintln!("slope over [{lo}, {hi}]: per cluster {c:.3}, per vertex {v:.3}");
        }
    }
    hist.write_csv(Weighting::Vertices, std::io::stdout().lock())
}
