use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{PcfError, Result};

/// Cluster-size counts merged over any number of runs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCensus {
    counts: BTreeMap<u64, u64>,
}

impl SizeCensus {
    pub fn new() -> SizeCensus {
        SizeCensus::default()
    }

    pub fn from_sizes<I: IntoIterator<Item = u32>>(sizes: I) -> SizeCensus {
        let mut c = SizeCensus::new();
        c.extend(sizes);
        c
    }

    pub fn extend<I: IntoIterator<Item = u32>>(&mut self, sizes: I) {
        for k in sizes {
            *self.counts.entry(u64::from(k)).or_default() += 1;
        }
    }

    pub fn merge(&mut self, other: &SizeCensus) {
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_default() += c;
        }
    }

    pub fn total_clusters(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn total_vertices(&self) -> u64 {
        self.counts.iter().map(|(k, c)| k * c).sum()
    }

    pub fn count(&self, k: u64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }
}

/// What a histogram density measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// Fraction of clusters with size `k`.
    Clusters,
    /// Fraction of vertices lying in a cluster of size `k`, i.e. the law of
    /// the cluster of a uniformly chosen vertex.
    Vertices,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bin {
    pub k_lo: u64,
    pub k_hi: u64,
    /// Clusters with size in `k_lo..=k_hi`.
    pub count: u64,
    /// Vertices in those clusters.
    pub mass: u64,
}

impl Bin {
    pub fn width(&self) -> u64 {
        self.k_hi - self.k_lo + 1
    }

    /// Geometric mean of the end points.
    pub fn center(&self) -> f64 {
        ((self.k_lo as f64) * (self.k_hi as f64)).sqrt()
    }
}

/// Log-binned cluster sizes: bins widen until each holds `min_per_bin` clusters.
#[derive(Debug, Clone, Serialize)]
pub struct SizeHistogram {
    pub bins: Vec<Bin>,
    pub total_clusters: u64,
    pub total_vertices: u64,
    pub min_per_bin: u64,
}

impl SizeHistogram {
    pub fn from_census(census: &SizeCensus, min_per_bin: u64) -> Result<SizeHistogram> {
        if min_per_bin == 0 {
            return Err(PcfError::Parameter("min_per_bin must be >= 1".into()));
        }
        if census.total_clusters() == 0 {
            return Err(PcfError::Domain("no clusters to bin".into()));
        }
        let mut bins = Vec::new();
        let mut open: Option<Bin> = None;
        for (k, c) in census.iter() {
            let bin = open.get_or_insert(Bin {
                k_lo: bins.last().map_or(1, |b: &Bin| b.k_hi + 1),
                k_hi: k,
                count: 0,
                mass: 0,
            });
            bin.k_hi = k;
            bin.count += c;
            bin.mass += k * c;
            if bin.count >= min_per_bin {
                bins.push(open.take().unwrap());
            }
        }
        bins.extend(open);
        Ok(SizeHistogram {
            bins,
            total_clusters: census.total_clusters(),
            total_vertices: census.total_vertices(),
            min_per_bin,
        })
    }

    /// Per-unit-size density of bin `i`.
    pub fn density(&self, i: usize, weighting: Weighting) -> f64 {
        let b = &self.bins[i];
        let (num, den) = match weighting {
            Weighting::Clusters => (b.count, self.total_clusters),
            Weighting::Vertices => (b.mass, self.total_vertices),
        };
        num as f64 / (b.width() as f64 * den as f64)
    }

    /// Bins holding at least `min_per_bin` clusters.
    pub fn full_bins(&self) -> impl Iterator<Item = (usize, &Bin)> + '_ {
        self.bins
            .iter()
            .enumerate()
            .filter(|(_, b)| b.count >= self.min_per_bin)
    }

    /// Least-squares slope of log density against log bin center over full
    /// bins with center in `[k_min, k_max]`.
    pub fn loglog_slope(&self, weighting: Weighting, k_min: f64, k_max: f64) -> Result<f64> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .full_bins()
            .filter(|(_, b)| b.center() >= k_min && b.center() <= k_max)
            .map(|(i, b)| (b.center().ln(), self.density(i, weighting).ln()))
            .unzip();
        if xs.len() < 2 {
            return Err(PcfError::Domain(format!(
                "need two full bins in [{k_min}, {k_max}] to fit a slope, have {}",
                xs.len()
            )));
        }
        Ok(crate::tree::least_squares(&xs, &ys).0)
    }

    /// Writes `k_center,k_lo,k_hi,count,density` rows.
    pub fn write_csv<W: std::io::Write>(&self, weighting: Weighting, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k_center", "k_lo", "k_hi", "count", "density"])
            .map_err(crate::tree::csv_err)?;
        for (i, b) in self.bins.iter().enumerate() {
            w.write_record([
                b.center().to_string(),
                b.k_lo.to_string(),
                b.k_hi.to_string(),
                b.count.to_string(),
                format!("{:e}", self.density(i, weighting)),
            ])
            .map_err(crate::tree::csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn singletons_make_one_bin() {
        let c = SizeCensus::from_sizes(vec![1; 30]);
        let h = SizeHistogram::from_census(&c, 100).unwrap();
        assert_eq!(h.bins.len(), 1);
        assert_eq!((h.bins[0].k_lo, h.bins[0].k_hi, h.bins[0].count), (1, 1, 30));
        assert_eq!(h.density(0, Weighting::Clusters), 1.0);
    }

    #[test]
    fn empty_census_is_an_error() {
        assert!(SizeHistogram::from_census(&SizeCensus::new(), 10).is_err());
    }

    #[test]
    fn bins_partition_and_hold_enough() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let sizes: Vec<u32> = (0..20_000)
            .map(|_| (1.0 / rng.random_range(1e-4..1.0f64)) as u32)
            .collect();
        let c = SizeCensus::from_sizes(sizes.iter().copied());
        let h = SizeHistogram::from_census(&c, 100).unwrap();
        assert_eq!(h.bins.iter().map(|b| b.count).sum::<u64>(), 20_000);
        assert_eq!(h.total_clusters, 20_000);
        assert_eq!(h.bins[0].k_lo, 1);
        for w in h.bins.windows(2) {
            assert_eq!(w[1].k_lo, w[0].k_hi + 1);
        }
        let n = h.bins.len();
        assert!(h.bins[..n - 1].iter().all(|b| b.count >= 100));
        let total: f64 = (0..n)
            .map(|i| h.density(i, Weighting::Clusters) * h.bins[i].width() as f64)
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn recovers_power_law_slope() {
        // P(K >= k) = 1/k gives density ~ k^-2, size-biased ~ k^-1
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let sizes = (0..400_000).map(|_| (1.0 / rng.random_range(0.0..1.0f64)).floor().min(1e9) as u32);
        let c = SizeCensus::from_sizes(sizes);
        let h = SizeHistogram::from_census(&c, 100).unwrap();
        let s = h.loglog_slope(Weighting::Clusters, 10.0, 1e4).unwrap();
        assert!((s + 2.0).abs() < 0.1, "{s}");
        let v = h.loglog_slope(Weighting::Vertices, 10.0, 1e4).unwrap();
        assert!((v + 1.0).abs() < 0.1, "{v}");
    }

    #[test]
    fn merge_is_order_free() {
        let a = SizeCensus::from_sizes([1, 2, 2, 5]);
        let b = SizeCensus::from_sizes([2, 9]);
        let mut ab = a.clone();
        ab.merge(&b);
        let mut ba = b.clone();
        ba.merge(&a);
        assert_eq!(ab, ba);
        assert_eq!(ab.count(2), 3);
        assert_eq!(ab.total_vertices(), 21);
    }
}
