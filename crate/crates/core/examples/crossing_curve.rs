//! Left-right crossing probability of PCF on the (n+1) x n grid as a
//! function of the freeze rate.
//!
//! cargo run --release --example crossing_curve -- [n] [replicas] [alpha_lo] [alpha_hi] [step]

use pcf::stats::{crossing_curve, write_crossing_csv};

fn main() -> pcf::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).map_or(default, |s| s.parse().expect("number"));
    let n = arg(0, 64.0) as u32;
    let replicas = arg(1, 400.0) as u64;
    let (lo, hi, step) = (arg(2, 0.45), arg(3, 0.65), arg(4, 0.02));
    let steps = ((hi - lo) / step).round() as usize;
    let alphas: Vec<f64> = (0..=steps).map(|i| lo + step * i as f64).collect();
    let points = crossing_curve(&alphas, &[n], replicas, 7, None)?;
    for p in &points {
        let e = &p.estimate;
        eprintln!(
            "alpha={:.3} n={} p_hat={:.4} [{:.4}, {:.4}]",
            p.alpha, p.n, e.p_hat, e.ci_low, e.ci_high
        );
    }
    write_crossing_csv(&points, std::io::stdout().lock())
}
