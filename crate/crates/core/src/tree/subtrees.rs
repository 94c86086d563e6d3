//! Counting rooted subtrees of the d-ary tree.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use statrs::function::gamma::ln_gamma;

/// Largest `d * k` for which the count is computed exactly.
pub const EXACT_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubtreeCount {
    Exact(BigUint),
    /// Natural log of the count.
    Log(LnCount),
}

/// Wrapper so the enum can derive `Eq` while carrying a float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnCount(pub f64);

impl Eq for LnCount {}

impl SubtreeCount {
    pub fn ln(&self) -> f64 {
        match self {
            SubtreeCount::Exact(n) => ln_biguint(n),
            SubtreeCount::Log(l) => l.0,
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            SubtreeCount::Exact(n) => Some(n),
            SubtreeCount::Log(_) => None,
        }
    }
}

/// Number of rooted subtrees with `k` vertices of the rooted d-ary tree,
/// `binom(dk, k-1) / k`.
pub fn count_subtrees(d: u32, k: u64) -> SubtreeCount {
    assert!(d >= 2 && k >= 1, "count_subtrees needs d >= 2 and k >= 1");
    let n = u64::from(d) * k;
    if n <= EXACT_LIMIT {
        SubtreeCount::Exact(binomial(n, k - 1) / BigUint::from(k))
    } else {
        SubtreeCount::Log(LnCount(ln_count_subtrees(d, k)))
    }
}

/// `ln(binom(dk, k-1) / k)` via log-gamma.
pub fn ln_count_subtrees(d: u32, k: u64) -> f64 {
    let (n, k) = (f64::from(d) * k as f64, k as f64);
    ln_gamma(n + 1.0) - ln_gamma(k) - ln_gamma(n - k + 2.0) - k.ln()
}

fn binomial(n: u64, r: u64) -> BigUint {
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts connected vertex sets containing the root of the depth-`depth`
    /// d-ary tree by growing them one frontier vertex at a time; every set is
    /// produced exactly once because a frontier vertex skipped at one level is
    /// never added deeper in that branch.
    fn enumerate(d: u64, depth: u32, k: usize) -> Vec<u64> {
        fn grow(
            d: u64,
            last_internal: u64,
            size: usize,
            k: usize,
            frontier: &mut Vec<u64>,
            counts: &mut [u64],
        ) {
            counts[size] += 1;
            if size == k {
                return;
            }
            let saved = frontier.len();
            let mut untried: Vec<u64> = frontier.clone();
            while let Some(v) = untried.pop() {
                let mut next: Vec<u64> = untried.clone();
                if v <= last_internal {
                    next.extend((1..=d).map(|j| d * v + j));
                }
                grow(d, last_internal, size + 1, k, &mut next, counts);
            }
            frontier.truncate(saved);
        }
        let n = (0..=depth).map(|i| d.pow(i)).sum::<u64>();
        let last_internal = (n - d.pow(depth)).saturating_sub(1);
        let mut counts = vec![0; k + 1];
        let mut frontier: Vec<u64> = if depth > 0 { (1..=d).collect() } else { vec![] };
        grow(d, last_internal, 1, k, &mut frontier, &mut counts);
        counts
    }

    #[test]
    fn singleton_count_is_one() {
        for d in 2..8 {
            assert_eq!(count_subtrees(d, 1).exact().unwrap(), &BigUint::one());
        }
    }

    #[test]
    fn binary_counts_match_enumeration() {
        let brute = enumerate(2, 12, 12);
        assert_eq!(brute[3], 5);
        for k in 1..=12 {
            let n = count_subtrees(2, k as u64);
            assert_eq!(n.exact().unwrap(), &BigUint::from(brute[k]), "k={k}");
        }
    }

    #[test]
    fn ternary_counts_match_enumeration() {
        let brute = enumerate(3, 10, 10);
        for k in 1..=10 {
            let n = count_subtrees(3, k as u64);
            assert_eq!(n.exact().unwrap(), &BigUint::from(brute[k]), "k={k}");
        }
    }

    #[test]
    fn log_gamma_matches_exact() {
        for (d, k) in [(2u32, 7u64), (2, 100), (3, 1000), (2, 5000), (5, 1999)] {
            let exact = count_subtrees(d, k);
            let l = ln_count_subtrees(d, k);
            assert!(((exact.ln() - l) / exact.ln().max(1.0)).abs() < 1e-12, "{d} {k}");
        }
        assert!(matches!(count_subtrees(2, 5001), SubtreeCount::Log(_)));
    }
}
