//! Probability that a vertex of Z^d sees an incident edge open before it
//! freezes, when each edge needs two warm half-edge clocks, and the rate
//! above which that falls below the site-percolation threshold.

use pcf::tree::{alpha_star, star_open_bound};

fn main() -> pcf::Result<()> {
    for alpha in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0] {
        println!("f(alpha={alpha:>4}) = {:.6}", star_open_bound(4, alpha)?);
    }
    // square-lattice site threshold
    let a = alpha_star(2, 0.5927)?;
    println!("alpha* for p_c = 0.5927: {a:.4}");
    Ok(())
}
