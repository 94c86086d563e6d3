//! PCF on a graph read from an edge-list file, with a chosen boundary.
//!
//! cargo run --release --example edge_list -- graph.txt

use pcf::engine::{run_pcf, run_warm_pcf, ClockSet};
use pcf::{Graph, PriorityOrder};

const PETERSEN: &str = "10 15 2
0 1
1 2
2 3
3 4
4 0
0 5
1 6
2 7
3 8
4 9
5 7
7 9
9 6
6 8
8 5
0
5
";

fn main() -> pcf::Result<()> {
    let g = match std::env::args().nth(1) {
        Some(path) => Graph::read_edge_list(path.as_ref())?,
        None => Graph::from_edge_list(PETERSEN)?,
    };
    let prio = PriorityOrder::for_graph(&g);
    for stream in 0..5 {
        let clocks = ClockSet::sample(&g, 0.5, 99, stream)?;
        let cold = run_pcf(&g, &prio, &clocks, f64::INFINITY)?;
        let warm = run_warm_pcf(&g, &prio, &clocks, f64::INFINITY)?;
        println!(
            "stream {stream}: pcf largest {} ({} open), warm largest {} ({} open)",
            cold.largest_cluster(),
            cold.final_config.open_count(),
            warm.largest_cluster(),
            warm.final_config.open_count()
        );
    }
    Ok(())
}
