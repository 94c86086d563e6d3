//! Final root-cluster size distribution on the infinite d-ary tree.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::cluster::{ln_cluster_prob, TreeParams};
use super::subtrees::{count_subtrees, ln_count_subtrees};
use crate::error::{PcfError, Result};

/// Sizes up to this use the exact subtree count.
const EXACT_COUNT_MAX_K: u64 = 50;

#[derive(Debug, Clone, Serialize)]
pub struct ClusterSizePmf {
    pub d: u32,
    pub alpha: f64,
    /// `ln_p[k - 1] = ln P(|C| = k)`.
    pub ln_p: Vec<f64>,
    pub k_max: u64,
    pub mass_deficit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailFit {
    pub exponent: f64,
    pub intercept: f64,
    pub k_range: (u64, u64),
    /// Largest absolute deviation from the fitted line in log-log space.
    pub residual: f64,
}

impl ClusterSizePmf {
    pub fn p(&self, k: u64) -> f64 {
        if k == 0 || k > self.k_max {
            return 0.0;
        }
        self.ln_p[(k - 1) as usize].exp()
    }

    pub fn ln_p(&self, k: u64) -> f64 {
        if k == 0 || k > self.k_max {
            return f64::NEG_INFINITY;
        }
        self.ln_p[(k - 1) as usize]
    }

    pub fn partial_sum(&self) -> f64 {
        self.ln_p.iter().map(|l| l.exp()).sum()
    }

    /// Estimated mass beyond `k_max`: geometric continuation above the
    /// critical rate, power-law continuation with the fitted exponent
    /// otherwise. Zero when `k_max` is too small to extrapolate.
    pub fn tail_estimate(&self) -> f64 {
        let k = self.k_max;
        if k < 100 {
            return 0.0;
        }
        let last = self.p(k);
        if self.alpha > f64::from(self.d) - 1.0 {
            let r = (self.ln_p(k) - self.ln_p(k - 1)).exp();
            if r >= 1.0 {
                return f64::INFINITY;
            }
            return last * r / (1.0 - r);
        }
        let fit = match fit_tail_exponent(self, (k / 10).max(10), k) {
            Ok(f) => f,
            Err(_) => return 0.0,
        };
        if fit.exponent <= 1.0 {
            return f64::INFINITY;
        }
        // sum_{j>k} last (j/k)^{-gamma} ~ integral from k minus half the first term
        last * (k as f64 / (fit.exponent - 1.0) - 0.5)
    }

    /// `partial_sum + tail_estimate`; below 1 means mass on infinite clusters.
    pub fn extrapolated_total(&self) -> f64 {
        self.partial_sum() + self.tail_estimate()
    }

    /// Writes `k,p_k,log_p_k` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "p_k", "log_p_k"]).map_err(csv_err)?;
        for (i, l) in self.ln_p.iter().enumerate() {
            w.write_record([(i + 1).to_string(), format!("{:e}", l.exp()), format!("{l}")])
                .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_err(e: csv::Error) -> PcfError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => PcfError::Io(io),
        other => PcfError::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// `ln P(|C| = k)` for the root cluster.
pub fn ln_root_cluster_prob(params: TreeParams, k: u64) -> Result<f64> {
    let d = u64::from(params.d);
    let ln_count = if k <= EXACT_COUNT_MAX_K {
        count_subtrees(params.d, k).ln()
    } else {
        ln_count_subtrees(params.d, k)
    };
    let a = (k - 1) as f64;
    let b = ((d - 1) * k + 1) as f64;
    Ok(ln_count + ln_cluster_prob(params.alpha, a, b)?)
}

/// `P(|C| = k)` for `k = 1..=k_max`.
pub fn root_cluster_size_pmf(params: TreeParams, k_max: u64) -> Result<ClusterSizePmf> {
    if k_max < 1 {
        return Err(PcfError::Parameter("k_max must be >= 1".into()));
    }
    let ln_p = (1..=k_max)
        .into_par_iter()
        .map(|k| ln_root_cluster_prob(params, k))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = ln_p.iter().map(|l| l.exp()).sum();
    Ok(ClusterSizePmf {
        d: params.d,
        alpha: params.alpha,
        ln_p,
        k_max,
        mass_deficit: 1.0 - total,
    })
}

/// Least-squares fit of `ln p_k` against `ln k` over `k_lo..=k_hi`.
pub fn fit_tail_exponent(pmf: &ClusterSizePmf, k_lo: u64, k_hi: u64) -> Result<TailFit> {
    if k_lo < 10 {
        return Err(PcfError::Parameter(format!("k_lo must be >= 10, got {k_lo}")));
    }
    if k_hi <= k_lo || k_hi > pmf.k_max {
        return Err(PcfError::Parameter(format!(
            "need k_lo < k_hi <= k_max = {}, got [{k_lo}, {k_hi}]",
            pmf.k_max
        )));
    }
    let mut xs = Vec::with_capacity((k_hi - k_lo + 1) as usize);
    let mut ys = Vec::with_capacity(xs.capacity());
    for k in k_lo..=k_hi {
        let l = pmf.ln_p(k);
        if !l.is_finite() {
            return Err(PcfError::Domain(format!("p_{k} is not positive")));
        }
        xs.push((k as f64).ln());
        ys.push(l);
    }
    let (slope, intercept) = least_squares(&xs, &ys);
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(TailFit {
        exponent: -slope,
        intercept,
        k_range: (k_lo, k_hi),
        residual,
    })
}

/// Ordinary least squares `y = intercept + slope * x`.
pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use crate::tree::open_prob;

    fn pmf(d: u32, alpha: f64, k_max: u64) -> ClusterSizePmf {
        root_cluster_size_pmf(TreeParams::new(d, alpha).unwrap(), k_max).unwrap()
    }

    /// P(root in an infinite cluster) on the binary tree: the root freezes at
    /// an Exp(alpha) time and its cluster is then a percolation cluster of
    /// edge density p(t), infinite with probability (2p-1)/p^2 for p > 1/2.
    fn binary_infinite_mass(alpha: f64) -> f64 {
        let theta = |t: f64| {
            let p = open_prob(alpha, t);
            if p <= 0.5 {
                0.0
            } else {
                alpha * (-alpha * t).exp() * (2.0 * p - 1.0) / (p * p)
            }
        };
        let t_c = (2.0 / (1.0 + alpha)).ln() / (1.0 + alpha);
        quad::integrate_rel(&theta, &[t_c, t_c + 60.0 / alpha], 1e-12)
            .unwrap()
            .value
    }

    #[test]
    fn small_sizes_by_hand() {
        let p = pmf(2, 1.0, 3);
        assert!((p.p(1) - 7.0 / 15.0).abs() < 1e-14);
        assert!(p.ln_p.iter().all(|l| l.is_finite()));
    }

    #[test]
    fn subcritical_mass_is_one() {
        let p = pmf(2, 2.0, 1000);
        assert!((p.partial_sum() - 1.0).abs() < 1e-6, "{}", p.partial_sum());
        assert!(p.mass_deficit.abs() < 1e-6);
    }

    #[test]
    fn supercritical_deficit_matches_infinite_cluster_mass() {
        for alpha in [0.5, 0.25] {
            let p = pmf(2, alpha, 2000);
            let deficit = 1.0 - p.extrapolated_total();
            let expect = binary_infinite_mass(alpha);
            assert!(expect > 0.01);
            assert!((deficit - expect).abs() < 2e-3, "{alpha}: {deficit} vs {expect}");
        }
    }

    #[test]
    fn exponential_regime_ratio() {
        // ratio tends to d^d/(d-1)^{d-1} x (1-x)^{d-1} at x = 1/(1+alpha)
        let p = pmf(2, 2.0, 3000);
        let x = 1.0 / 3.0;
        let limit = 4.0 * x * (1.0 - x);
        let r = (p.ln_p(3000) - p.ln_p(2999)).exp();
        assert!((r - limit).abs() < 1e-3, "{r} vs {limit}");
        let second: Vec<f64> = (2990..3000).map(|k| p.ln_p(k + 1) - 2.0 * p.ln_p(k) + p.ln_p(k - 1)).collect();
        assert!(second.iter().all(|s| s.abs() < 1e-5));
    }

    #[test]
    fn deficit_grows_as_alpha_decreases() {
        let a = 1.0 - pmf(2, 0.3, 1000).extrapolated_total();
        let b = 1.0 - pmf(2, 0.6, 1000).extrapolated_total();
        assert!(a > b && b > 0.0);
    }

    #[test]
    fn fit_rejects_bad_ranges() {
        let p = pmf(2, 1.0, 200);
        assert!(fit_tail_exponent(&p, 5, 100).is_err());
        assert!(fit_tail_exponent(&p, 100, 300).is_err());
        assert!(fit_tail_exponent(&p, 100, 100).is_err());
    }

    #[test]
    fn csv_has_header() {
        let p = pmf(2, 1.0, 5);
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,p_k,log_p_k\n1,"));
        assert_eq!(text.lines().count(), 6);
    }
}
