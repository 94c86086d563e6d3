//! Probability that the final root cluster equals a given finite subtree.

use serde::{Deserialize, Serialize};

use crate::error::{PcfError, Result};
use crate::quad;

const REL_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub d: u32,
    pub alpha: f64,
}

impl TreeParams {
    pub fn new(d: u32, alpha: f64) -> Result<TreeParams> {
        if d < 2 {
            return Err(PcfError::Parameter(format!("branching factor must be >= 2, got {d}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(PcfError::Parameter(format!("freeze rate must be positive, got {alpha}")));
        }
        Ok(TreeParams { d, alpha })
    }
}

/// `alpha * int_0^{1/(1+alpha)} p^a (1-p)^b (1-(1+alpha)p)^{-1/(1+alpha)} dp`,
/// the probability that the root cluster is a fixed subtree with `a` edges
/// and `b` boundary edges (pass `b = 0` for the containment probability).
pub fn cluster_prob(params: TreeParams, edge_count: u64, boundary_count: u64) -> Result<f64> {
    Ok(ln_cluster_prob(params.alpha, edge_count as f64, boundary_count as f64)?.exp())
}

/// Natural log of [`cluster_prob`], accurate when the probability underflows.
///
/// With `s = (1-(1+alpha)p)^{alpha/(1+alpha)}` the singular factor cancels
/// and the integral becomes `int_0^1 p(s)^a (1-p(s))^b ds`. The integrand is
/// divided by its maximum and the range split at the peak.
pub fn ln_cluster_prob(alpha: f64, a: f64, b: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(PcfError::Parameter(format!("freeze rate must be positive, got {alpha}")));
    }
    if !(a >= 0.0 && b >= 0.0) {
        return Err(PcfError::Parameter(format!("counts must be non-negative, got {a}, {b}")));
    }
    if a == 0.0 && b == 0.0 {
        return Ok(0.0);
    }
    let c = (1.0 + alpha) / alpha;
    let p_max = 1.0 / (1.0 + alpha);
    let p_of = |s: f64| -(c * s.ln()).exp_m1() * p_max;
    let g = |p: f64| {
        let mut v = 0.0;
        if a > 0.0 {
            v += a * p.ln();
        }
        if b > 0.0 {
            v += b * (-p).ln_1p();
        }
        v
    };
    let p_peak = (a / (a + b)).min(p_max);
    let s_peak = (1.0 - (1.0 + alpha) * p_peak).max(0.0).powf(1.0 / c);
    let g_max = g(p_peak);
    let f = |s: f64| {
        if s <= 0.0 {
            return (g(p_max) - g_max).exp();
        }
        let v = (g(p_of(s)) - g_max).exp();
        if v.is_nan() {
            0.0
        } else {
            v
        }
    };
    let mut points = vec![0.0];
    if s_peak > 0.0 && s_peak < 1.0 {
        points.push(s_peak);
    }
    points.push(1.0);
    let q = quad::integrate_rel(&f, &points, REL_TOL)?;
    if !(q.value > 0.0) {
        return Err(PcfError::Quadrature {
            lo: 0.0,
            hi: 1.0,
            estimate: q.value,
            error: q.error,
        });
    }
    Ok(g_max + q.value.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64) -> TreeParams {
        TreeParams::new(2, alpha).unwrap()
    }

    // Direct p-space Simpson with the singular endpoint handled by a
    // power-law graded mesh, as an independent check.
    fn graded(alpha: f64, a: i32, b: i32) -> f64 {
        let n = 200_000;
        let p_max = 1.0 / (1.0 + alpha);
        let e = 1.0 / (1.0 + alpha);
        let mut total = 0.0;
        for i in 0..n {
            // p = p_max (1 - (1-u)^12) clusters nodes near the singular end
            let (u0, u1) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            let um = 0.5 * (u0 + u1);
            let h = |u: f64| {
                let w = 1.0 - u;
                let p = p_max * (1.0 - w.powi(12));
                let dp = p_max * 12.0 * w.powi(11);
                // 1 - (1+alpha) p, written without cancellation
                let sing = w.powi(12);
                if sing == 0.0 {
                    return 0.0;
                }
                alpha * p.powi(a) * (1.0 - p).powi(b) * sing.powf(-e) * dp
            };
            total += (u1 - u0) / 6.0 * (h(u0) + 4.0 * h(um) + h(u1));
        }
        total
    }

    #[test]
    fn empty_cluster_has_probability_one() {
        for alpha in [0.1, 1.0, 7.0] {
            assert_eq!(cluster_prob(params(alpha), 0, 0).unwrap(), 1.0);
        }
    }

    #[test]
    fn singleton_binary_unit_rate_closed_form() {
        // alpha = 1: p = (1-s^2)/2, integrand ((1+s^2)/2)^2, integral 7/15
        let v = cluster_prob(params(1.0), 0, 2).unwrap();
        assert!((v - 7.0 / 15.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn agrees_with_graded_mesh() {
        for (alpha, a, b) in [(0.5, 1, 3), (1.0, 2, 4), (2.0, 5, 7), (3.0, 0, 9)] {
            let v = cluster_prob(params(alpha), a as u64, b as u64).unwrap();
            let w = graded(alpha, a, b);
            assert!(((v - w) / w).abs() < 1e-6, "{alpha} {a} {b}: {v} vs {w}");
        }
    }

    /// For `alpha = 1/m` the substituted integrand is a polynomial in `s`.
    fn polynomial_oracle(m: u32, a: u32, b: u32) -> f64 {
        let c = (m + 1) as usize;
        let scale = m as f64 / (m + 1) as f64;
        let mul = |x: &[f64], y: &[f64]| {
            let mut z = vec![0.0; x.len() + y.len() - 1];
            for (i, xi) in x.iter().enumerate() {
                for (j, yj) in y.iter().enumerate() {
                    z[i + j] += xi * yj;
                }
            }
            z
        };
        let mut p = vec![0.0; c + 1];
        p[0] = scale;
        p[c] = -scale;
        let mut q = p.iter().map(|x| -x).collect::<Vec<_>>();
        q[0] += 1.0;
        let mut poly = vec![1.0];
        for _ in 0..a {
            poly = mul(&poly, &p);
        }
        for _ in 0..b {
            poly = mul(&poly, &q);
        }
        poly.iter().enumerate().map(|(i, x)| x / (i + 1) as f64).sum()
    }

    #[test]
    fn exact_rational_case() {
        // alpha = 1/2, one edge, three boundary edges: 47/910
        let v = cluster_prob(params(0.5), 1, 3).unwrap();
        assert!((v - 47.0 / 910.0).abs() < 1e-14);
    }

    #[test]
    fn agrees_with_polynomial_cases() {
        for (m, a, b) in [(2, 1, 3), (1, 4, 6), (3, 2, 5), (4, 0, 3), (2, 3, 4)] {
            let v = cluster_prob(params(1.0 / m as f64), a as u64, b as u64).unwrap();
            let w = polynomial_oracle(m, a, b);
            assert!(((v - w) / w).abs() < 1e-10, "{m} {a} {b}: {v} vs {w}");
        }
    }

    #[test]
    fn fast_freezing_leaves_singleton() {
        let v = cluster_prob(params(1e6), 0, 5).unwrap();
        assert!((v - 1.0).abs() < 1e-4);
    }

    #[test]
    fn decreasing_in_boundary_count() {
        for alpha in [0.3, 1.0, 4.0] {
            let mut last = 1.0;
            for b in 1..30 {
                let v = cluster_prob(params(alpha), 3, b).unwrap();
                assert!(v < last);
                last = v;
            }
        }
    }

    #[test]
    fn log_space_handles_underflow() {
        let l = ln_cluster_prob(1.0, 9999.0, 10001.0).unwrap();
        assert!(l.is_finite() && l < -700.0);
        let l2 = ln_cluster_prob(1.0, 9999.0, 10002.0).unwrap();
        assert!(l2 < l);
    }
}
