use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Success count with a 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BernoulliEstimate {
    pub successes: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl BernoulliEstimate {
    pub fn new(successes: u64, trials: u64) -> BernoulliEstimate {
        assert!(successes <= trials, "successes exceed trials");
        if trials == 0 {
            return BernoulliEstimate {
                successes,
                trials,
                p_hat: 0.0,
                ci_low: 0.0,
                ci_high: 1.0,
            };
        }
        let n = trials as f64;
        let p = successes as f64 / n;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        BernoulliEstimate {
            successes,
            trials,
            p_hat: p,
            ci_low: (center - half).max(0.0).min(p),
            ci_high: (center + half).min(1.0).max(p),
        }
    }

    pub fn merge(&self, other: &BernoulliEstimate) -> BernoulliEstimate {
        BernoulliEstimate::new(self.successes + other.successes, self.trials + other.trials)
    }

    /// Binomial standard error of `p_hat`.
    pub fn std_error(&self) -> f64 {
        if self.trials == 0 {
            return f64::INFINITY;
        }
        (self.p_hat * (1.0 - self.p_hat) / self.trials as f64).sqrt()
    }

    /// `Some(true)` if the interval lies above `p`, `Some(false)` if below.
    pub fn side_of(&self, p: f64) -> Option<bool> {
        if self.ci_low > p {
            Some(true)
        } else if self.ci_high < p {
            Some(false)
        } else {
            None
        }
    }
}
