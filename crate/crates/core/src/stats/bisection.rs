use serde::Serialize;

use super::bernoulli::BernoulliEstimate;
use super::crossing::{crossing_grid, estimate_crossing_on, CrossingMode};
use crate::error::{PcfError, Result};
use crate::graph::Graph;

const FIRST_BATCH: u64 = 200;

#[derive(Debug, Clone, Copy)]
pub struct AlphaSearch {
    pub n: u32,
    pub bracket: (f64, f64),
    pub target_width: f64,
    pub replica_budget: u64,
    pub base_seed: u64,
    pub threads: Option<usize>,
}

/// A tested rate and its crossing estimate. `above` is the side of 1/2 the
/// interval landed on, `None` if the point stayed undecided.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchPoint {
    pub alpha: f64,
    pub estimate: BernoulliEstimate,
    pub above: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaCEstimate {
    /// Rates known (at 95% per test) to cross above and below probability 1/2.
    pub interval: (f64, f64),
    /// Points in the order tested.
    pub points: Vec<SearchPoint>,
    pub replicas_used: u64,
    /// The search stopped short of the target width: budget spent or probes undecided.
    pub budget_exhausted: bool,
    /// Pairs of decided points whose crossing estimates increase with `alpha`.
    pub monotone_violations: Vec<(f64, f64)>,
}

impl AlphaCEstimate {
    pub fn width(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.interval.0 + self.interval.1)
    }
}

struct Search<'a> {
    cfg: &'a AlphaSearch,
    grid: Graph,
    used: u64,
    points: Vec<SearchPoint>,
}

impl Search<'_> {
    fn remaining(&self) -> u64 {
        self.cfg.replica_budget.saturating_sub(self.used)
    }

    /// Add doubling batches at `alpha` until the Wilson interval excludes
    /// 1/2 or `cap` replicas have been spent on this point.
    fn test(&mut self, alpha: f64, cap: u64) -> Result<SearchPoint> {
        let cap = cap.min(self.remaining());
        let mut est = BernoulliEstimate::new(0, 0);
        let mut batch = FIRST_BATCH;
        while est.trials < cap {
            let take = batch.min(cap - est.trials);
            // every point reuses streams 0.. so nearby rates share clocks
            let more = estimate_crossing_on(
                &self.grid,
                CrossingMode::Pcf { alpha },
                take,
                self.cfg.base_seed,
                est.trials,
                self.cfg.threads,
            )?;
            est = est.merge(&more);
            self.used += take;
            if est.side_of(0.5).is_some() {
                break;
            }
            batch *= 2;
        }
        let point = SearchPoint {
            alpha,
            estimate: est,
            above: est.side_of(0.5),
        };
        self.points.push(point);
        Ok(point)
    }
}

/// Bisect for the rate at which the left-right crossing probability of the
/// `(n+1) x n` grid equals 1/2.
pub fn estimate_alpha_c(cfg: &AlphaSearch) -> Result<AlphaCEstimate> {
    let (mut lo, mut hi) = cfg.bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(PcfError::Parameter(format!("bad bracket [{lo}, {hi}]")));
    }
    if !(cfg.target_width > 0.0) {
        return Err(PcfError::Parameter("target width must be positive".into()));
    }
    let mut s = Search {
        cfg,
        grid: crossing_grid(cfg.n)?,
        used: 0,
        points: Vec::new(),
    };
    let end_cap = (cfg.replica_budget / 10).max(FIRST_BATCH);
    let at_lo = s.test(lo, end_cap)?;
    let at_hi = s.test(hi, end_cap)?;
    if at_lo.above != Some(true) || at_hi.above != Some(false) {
        return Err(PcfError::Bracket(format!(
            "crossing estimates {:.4} at {lo} and {:.4} at {hi} do not straddle 1/2",
            at_lo.estimate.p_hat, at_hi.estimate.p_hat
        )));
    }
    let mut budget_exhausted = false;
    while hi - lo > cfg.target_width {
        let steps_left = ((hi - lo) / cfg.target_width).log2().ceil().max(1.0) as u64;
        let cap = (s.remaining() / (steps_left + 1)).max(FIRST_BATCH);
        if s.remaining() == 0 {
            budget_exhausted = true;
            break;
        }
        let mid = 0.5 * (lo + hi);
        match s.test(mid, cap)?.above {
            Some(true) => lo = mid,
            Some(false) => hi = mid,
            None => {
                // the root sits close to `mid`: bracket it from both sides
                let q = 0.25 * (hi - lo);
                let left = s.test(mid - q, cap)?;
                let right = s.test(mid + q, cap)?;
                if left.above.is_none() && right.above.is_none() {
                    budget_exhausted = true;
                    break;
                }
                for p in [left, right] {
                    match p.above {
                        Some(true) => lo = lo.max(p.alpha),
                        Some(false) => hi = hi.min(p.alpha),
                        None => {}
                    }
                }
                if lo >= hi {
                    // contradictory decisions; keep the probes as the interval
                    (lo, hi) = (left.alpha.min(right.alpha), left.alpha.max(right.alpha));
                    budget_exhausted = true;
                    break;
                }
                if s.remaining() == 0 && hi - lo > cfg.target_width {
                    budget_exhausted = true;
                    break;
                }
            }
        }
    }
    let monotone_violations = monotone_violations(&s.points);
    Ok(AlphaCEstimate {
        interval: (lo, hi),
        points: s.points,
        replicas_used: s.used,
        budget_exhausted,
        monotone_violations,
    })
}

fn monotone_violations(points: &[SearchPoint]) -> Vec<(f64, f64)> {
    let mut decided: Vec<&SearchPoint> = points.iter().filter(|p| p.above.is_some()).collect();
    decided.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    decided
        .windows(2)
        .filter(|w| w[1].estimate.p_hat > w[0].estimate.p_hat)
        .map(|w| (w[0].alpha, w[1].alpha))
        .collect()
}
