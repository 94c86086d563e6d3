//! One set of clocks driving PCF and warm PCF on nested subgraphs of a grid.
//!
//! On a subgraph, vertices outside count as frozen for PCF and as warm for
//! warm PCF. Warm PCF on the smaller graph dominates warm PCF on the larger
//! one at every time, and warm PCF dominates PCF on the same graph.

use pcf::engine::{ClockSet, Simulation, Variant};
use pcf::{Graph, PriorityOrder, Subgraph};

fn main() -> pcf::Result<()> {
    let g = Graph::grid(8, 8)?;
    let prio = PriorityOrder::for_graph(&g);
    let clocks = ClockSet::sample(&g, 0.7, 21, 0)?;
    let inner: Vec<u32> = (0..64).filter(|v| (2..6).contains(&(v % 8)) && (2..6).contains(&(v / 8))).collect();
    let small = Subgraph::induced(&g, &inner)?;
    let large = Subgraph::full(&g);

    let mut warm_small = Simulation::new(&g, &prio, &clocks).variant(Variant::Warm).subgraph(&small).start()?;
    let mut warm_large = Simulation::new(&g, &prio, &clocks).variant(Variant::Warm).subgraph(&large).start()?;
    let mut pcf_large = Simulation::new(&g, &prio, &clocks).subgraph(&large).start()?;
    let mut checks = 0;
    for i in 1..=40 {
        let t = 0.1 * i as f64;
        for run in [&mut warm_small, &mut warm_large, &mut pcf_large] {
            run.advance_to(t);
        }
        let (ws, wl, pl) = (warm_small.configuration(), warm_large.configuration(), pcf_large.configuration());
        assert!(ws.dominates(&wl), "nesting order broken at t={t}");
        assert!(wl.dominates(&pl), "warm below pcf at t={t}");
        checks += 1;
    }
    let done = pcf_large.finish();
    println!("{checks} time points checked; final PCF has {} clusters, largest {}", done.cluster_sizes.len(), done.largest_cluster());
    Ok(())
}
