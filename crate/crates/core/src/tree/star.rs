//! Probability that a vertex stays warm until one of its incident edges opens
//! when all edges start closed and clocks are Gamma(1/2, 1).

use statrs::function::erf::erfc;

use crate::error::{PcfError, Result};
use crate::quad;

const REL_TOL: f64 = 1e-11;

/// `P(Exp(alpha) > min of degree i.i.d. Gamma(1/2, 1))`.
///
/// Equals `E[exp(-alpha M)]` for the minimum `M`; with `y = u^2` the density of
/// `M` becomes `degree (2/sqrt(pi)) e^{-u^2} erfc(u)^{degree-1} du`.
pub fn star_open_bound(degree: u32, alpha: f64) -> Result<f64> {
    if degree < 1 {
        return Err(PcfError::Parameter("degree must be >= 1".into()));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(PcfError::Parameter(format!("freeze rate must be positive, got {alpha}")));
    }
    let n = f64::from(degree);
    let c = n * 2.0 / std::f64::consts::PI.sqrt();
    let f = |u: f64| c * (-(1.0 + alpha) * u * u).exp() * erfc(u).powi(degree as i32 - 1);
    let upper = (50.0 / (1.0 + alpha)).sqrt();
    Ok(quad::integrate_rel(&f, &[0.0, upper], REL_TOL)?.value)
}

/// Largest `alpha` with `star_open_bound(2d, alpha) >= p_site`, to within `1e-7`.
pub fn alpha_star(d: u32, p_site: f64) -> Result<f64> {
    if !(p_site > 0.0 && p_site < 1.0) {
        return Err(PcfError::Parameter(format!("site threshold must be in (0,1), got {p_site}")));
    }
    let degree = 2 * d;
    let excess = |a: f64| star_open_bound(degree, a).map(|f| f - p_site);
    let mut lo = 0.0;
    let mut hi = 1.0;
    while excess(hi)? > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e8 {
            return Err(PcfError::Bracket(format!(
                "bound stays above {p_site} for alpha up to {hi:e}"
            )));
        }
    }
    while hi - lo > 1e-7 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Exp, Gamma};

    #[test]
    fn limits_in_alpha() {
        assert!((star_open_bound(4, 1e-9).unwrap() - 1.0).abs() < 1e-6);
        let mut last = 1.0;
        for alpha in [0.01, 0.1, 1.0, 10.0, 100.0, 1e4] {
            let f = star_open_bound(4, alpha).unwrap();
            assert!(f < last);
            last = f;
        }
        assert!(last < 0.05);
    }

    #[test]
    fn single_gamma_closed_form() {
        // E[exp(-alpha G)] for G ~ Gamma(1/2,1) is (1+alpha)^{-1/2}
        for alpha in [0.2, 1.0, 5.0] {
            let f = star_open_bound(1, alpha).unwrap();
            assert!((f - (1.0 + alpha).powf(-0.5)).abs() < 1e-10);
        }
    }

    #[test]
    fn larger_degree_larger_bound() {
        for alpha in [0.5, 2.0, 20.0] {
            let fs: Vec<f64> = (1..8).map(|n| star_open_bound(n, alpha).unwrap()).collect();
            assert!(fs.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn monte_carlo_agreement() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let (x, g) = (Exp::new(1.0).unwrap(), Gamma::new(0.5, 1.0).unwrap());
        let n = 400_000;
        let hits = (0..n)
            .filter(|_| {
                let m = (0..4).map(|_| g.sample(&mut rng)).fold(f64::INFINITY, f64::min);
                x.sample(&mut rng) > m
            })
            .count();
        let p = hits as f64 / n as f64;
        let f = star_open_bound(4, 1.0).unwrap();
        let se = (f * (1.0 - f) / n as f64).sqrt();
        assert!((p - f).abs() < 4.0 * se, "{p} vs {f}");
    }

    #[test]
    fn alpha_star_solves_and_decreases() {
        let a = alpha_star(2, 0.59).unwrap();
        assert!((star_open_bound(4, a).unwrap() - 0.59).abs() < 1e-6);
        let mut last = f64::INFINITY;
        for p in [0.3, 0.5, 0.7, 0.9, 0.99] {
            let a = alpha_star(2, p).unwrap();
            assert!(a < last);
            last = a;
        }
        assert!(alpha_star(2, 0.999_999).unwrap() < 1e-3);
        assert!(alpha_star(2, 1.5).is_err());
    }
}
