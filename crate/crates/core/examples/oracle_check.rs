//! Exact final-state distribution on small graphs against the engine.
//!
//! cargo run --release --example oracle_check -- [graph] [alpha] [replicas]
//! where graph is one of single-edge, p3, p4, c3, c4, s3.

use pcf::oracle::{compare_with_engine, enumerate_states, named_graph};

fn main() -> pcf::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let name = args.first().map_or("c4", String::as_str);
    let alpha: f64 = args.get(1).map_or(1.0, |s| s.parse().expect("alpha"));
    let replicas: u64 = args.get(2).map_or(50_000, |s| s.parse().expect("replicas"));

    let g = named_graph(name)?;
    let space = enumerate_states(&g)?;
    println!(
        "{name}: {} vertices, {} edges, {} states, {} absorbing",
        g.vertex_count(),
        g.edge_count(),
        space.len(),
        space.absorbing().count()
    );
    println!("{:>6} {:>6} {:>10} {:>10} {:>7}", "frozen", "open", "exact", "engine", "z");
    for c in compare_with_engine(&g, alpha, replicas, 11)? {
        println!(
            "{:>6b} {:>6b} {:>10.6} {:>10.6} {:>7.2}",
            c.frozen, c.open, c.exact, c.estimate.p_hat, c.z
        );
    }
    Ok(())
}
