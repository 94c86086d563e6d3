//! Bond percolation read off the edge clocks at time ln 2, where each edge is
//! open with probability 1/2: the left-right crossing probability of the
//! 33 x 32 grid is 1/2 by self-duality.

use pcf::stats::{estimate_crossing, CrossingMode};

fn main() -> pcf::Result<()> {
    let t = std::f64::consts::LN_2;
    let e = estimate_crossing(32, CrossingMode::Percolation { t }, 10_000, 1, 0, None)?;
    println!(
        "crossing frequency {:.4} [{:.4}, {:.4}] over {} grids",
        e.p_hat, e.ci_low, e.ci_high, e.trials
    );
    Ok(())
}
