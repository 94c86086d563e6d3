//! Time rescaling of PCF on trees and the critical values it implies.

use crate::error::{PcfError, Result};

/// Probability that an edge next to a warm vertex is open at time `t`:
/// `(1 - exp(-(1+alpha) t)) / (1 + alpha)`. Accepts `t = f64::INFINITY`.
pub fn open_prob(alpha: f64, t: f64) -> f64 {
    if t == f64::INFINITY {
        return 1.0 / (1.0 + alpha);
    }
    -(-(1.0 + alpha) * t).exp_m1() / (1.0 + alpha)
}

/// Percolation time `tau` with `1 - exp(-tau) = open_prob(alpha, t)`.
pub fn percolation_time(alpha: f64, t: f64) -> f64 {
    -(-open_prob(alpha, t)).ln_1p()
}

/// Mean-field rescaled time `(1 - exp(-alpha t)) / alpha`; tends to `t` as `alpha -> 0`.
pub fn meanfield_time(alpha: f64, t: f64) -> f64 {
    if alpha == 0.0 {
        return t;
    }
    -(-alpha * t).exp_m1() / alpha
}

/// Critical freezing rate on the d-ary tree.
pub fn critical_alpha(d: u32) -> f64 {
    f64::from(d) - 1.0
}

/// Time at which infinite clusters appear for `0 < alpha < d - 1`: the
/// solution of `open_prob(alpha, t) = 1/d`, i.e. `-ln(1 - (1+alpha)/d) / (1+alpha)`.
pub fn critical_time(d: u32, alpha: f64) -> Result<f64> {
    if d < 2 {
        return Err(PcfError::Parameter(format!("branching factor must be >= 2, got {d}")));
    }
    if !(alpha > 0.0) {
        return Err(PcfError::Parameter(format!("freeze rate must be positive, got {alpha}")));
    }
    if alpha >= critical_alpha(d) {
        return Err(PcfError::Domain(format!(
            "alpha = {alpha} >= d - 1 = {}: all clusters stay finite, no critical time",
            critical_alpha(d)
        )));
    }
    Ok(-(-(1.0 + alpha) / f64::from(d)).ln_1p() / (1.0 + alpha))
}
