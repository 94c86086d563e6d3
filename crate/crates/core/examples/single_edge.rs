//! The smallest non-trivial case: one edge between two vertices.
//!
//! The edge ends open iff its clock rings before either endpoint freezes,
//! which happens with probability 1/(1+2 alpha). Compare the engine's
//! frequency with that value and with the exact oracle.

use pcf::oracle::{enumerate_states, final_distribution, marginal};
use pcf::stats::{map_replicas, BernoulliEstimate, ReplicaPlan};
use pcf::Graph;

fn main() -> pcf::Result<()> {
    let g = Graph::generic(2, &[(0, 1)], &[])?;
    let space = enumerate_states(&g)?;
    println!("reachable states: {}", space.len());
    for alpha in [0.25, 1.0, 4.0] {
        let exact = marginal(&final_distribution(&space, alpha)?, &space, |c| c.is_open(0));
        let plan = ReplicaPlan::new(&g, alpha, 100_000, 1);
        let open = map_replicas(&plan, |_, r| r.final_config.is_open(0))?;
        let est = BernoulliEstimate::new(open.iter().filter(|&&o| o).count() as u64, open.len() as u64);
        println!(
            "alpha={alpha:<5} oracle={exact:.6} 1/(1+2a)={:.6} engine={:.5} [{:.5}, {:.5}]",
            1.0 / (1.0 + 2.0 * alpha),
            est.p_hat,
            est.ci_low,
            est.ci_high
        );
    }
    Ok(())
}
