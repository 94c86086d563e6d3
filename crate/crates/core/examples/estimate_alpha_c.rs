//! Bisection for the freeze rate at which the left-right crossing
//! probability of the (n+1) x n grid is 1/2.
//!
//! cargo run --release --example estimate_alpha_c -- [n] [budget]

use pcf::stats::{estimate_alpha_c, AlphaSearch};

fn main() -> pcf::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: u32 = args.first().map_or(64, |s| s.parse().expect("n"));
    let budget: u64 = args.get(1).map_or(30_000, |s| s.parse().expect("budget"));
    let r = estimate_alpha_c(&AlphaSearch {
        n,
        bracket: (0.45, 0.65),
        target_width: 0.02,
        replica_budget: budget,
        base_seed: 3,
        threads: None,
    })?;
    for p in &r.points {
        println!(
            "alpha={:.5} trials={:>6} p_hat={:.4} [{:.4}, {:.4}] {:?}",
            p.alpha, p.estimate.trials, p.estimate.p_hat, p.estimate.ci_low, p.estimate.ci_high, p.above
        );
    }
    println!(
        "alpha_c in [{:.4}, {:.4}], {} replicas used{}",
        r.interval.0,
        r.interval.1,
        r.replicas_used,
        if r.budget_exhausted { ", stopped early" } else { "" }
    );
    Ok(())
}
