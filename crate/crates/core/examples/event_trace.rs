//! Step through a run event by event and write its trace.

use pcf::engine::{write_trace, ClockSet, Simulation};
use pcf::{Graph, PriorityOrder};

fn main() -> pcf::Result<()> {
    let g = Graph::grid(3, 3)?;
    let prio = PriorityOrder::for_graph(&g);
    let clocks = ClockSet::sample(&g, 1.0, 8, 0)?;
    let mut run = Simulation::new(&g, &prio, &clocks).record_trace(true).start()?;
    while let Some(t) = run.step() {
        let c = run.configuration();
        println!("t={t:.4} open={} frozen={}", c.open_count(), c.frozen_count());
    }
    let result = run.finish();
    write_trace(std::io::stdout().lock(), result.trace.as_deref().unwrap_or(&[]))?;
    Ok(())
}
