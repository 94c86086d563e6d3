//! Root-cluster size distribution on the rooted d-ary tree, its tail
//! exponent and the mass carried by infinite clusters.
//!
//! cargo run --release --example tree_pmf -- [d] [alpha] [k_max]

use pcf::tree::{critical_alpha, fit_tail_exponent, root_cluster_size_pmf, TreeParams};

fn main() -> pcf::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d: u32 = args.first().map_or(2, |s| s.parse().expect("d"));
    let alpha: f64 = args.get(1).map_or(1.0, |s| s.parse().expect("alpha"));
    let k_max: u64 = args.get(2).map_or(10_000, |s| s.parse().expect("k_max"));

    let pmf = root_cluster_size_pmf(TreeParams::new(d, alpha)?, k_max)?;
    for k in 1..=6 {
        println!("p_{k} = {:.6}", pmf.p(k));
    }
    println!("sum up to {k_max}: {:.6}", pmf.partial_sum());
    println!("with extrapolated tail: {:.6}", pmf.extrapolated_total());
    if alpha < critical_alpha(d) {
        println!("infinite-cluster mass ~ {:.4}", 1.0 - pmf.extrapolated_total());
    }
    if k_max >= 1000 {
        let fit = fit_tail_exponent(&pmf, k_max / 100, k_max)?;
        println!(
            "tail exponent over [{}, {}]: {:.4} (max residual {:.2e})",
            fit.k_range.0, fit.k_range.1, fit.exponent, fit.residual
        );
    }
    if alpha > critical_alpha(d) {
        let r = (pmf.ln_p(k_max) - pmf.ln_p(k_max - 1)).exp();
        println!("p_(k+1)/p_k at k_max: {r:.6}");
    }
    Ok(())
}
