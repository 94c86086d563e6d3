use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{PcfError, Result};
use crate::graph::Graph;

const VERTEX_KIND: u64 = 0;
const EDGE_KIND: u64 = 1;

/// Counter-based source of clock values.
///
/// Clock `i` of each kind is the `i`-th 64-bit word of a ChaCha8 stream keyed
/// by `(seed, 2*stream_id + kind)`, so any single clock can be regenerated
/// without drawing the ones before it. [`ClockSet::sample`] and the lazy tree
/// sampler read the same words and therefore see identical clocks.
#[derive(Debug, Clone)]
pub struct ClockStream {
    seed: u64,
    stream_id: u64,
    vertex_rng: ChaCha8Rng,
    edge_rng: ChaCha8Rng,
}

/// Map a uniform word to `(0, 1)`, never hitting either endpoint.
#[inline]
fn open_unit(word: u64) -> f64 {
    ((word >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// Inverse-CDF sample of `Exp(1)`; strictly positive and finite.
#[inline]
fn unit_exponential(word: u64) -> f64 {
    -open_unit(word).ln()
}

impl ClockStream {
    pub fn new(seed: u64, stream_id: u64) -> ClockStream {
        let base = ChaCha8Rng::seed_from_u64(seed);
        let mut vertex_rng = base.clone();
        vertex_rng.set_stream(stream_id.wrapping_mul(2).wrapping_add(VERTEX_KIND));
        let mut edge_rng = base;
        edge_rng.set_stream(stream_id.wrapping_mul(2).wrapping_add(EDGE_KIND));
        ClockStream {
            seed,
            stream_id,
            vertex_rng,
            edge_rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    fn word(rng: &ChaCha8Rng, index: u64) -> u64 {
        let mut rng = rng.clone();
        rng.set_word_pos(u128::from(index) * 2);
        rng.next_u64()
    }

    /// `Exp(alpha)` freeze clock of vertex `index`.
    pub fn vertex_clock(&self, index: u64, alpha: f64) -> f64 {
        unit_exponential(Self::word(&self.vertex_rng, index)) / alpha
    }

    /// `Exp(1)` opening clock of edge `index`.
    pub fn edge_clock(&self, index: u64) -> f64 {
        unit_exponential(Self::word(&self.edge_rng, index))
    }

    fn fill(rng: &ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
        let mut rng = rng.clone();
        rng.set_word_pos(0);
        (0..n).map(|_| unit_exponential(rng.next_u64()) / scale).collect()
    }
}

/// One exponential clock per vertex (rate `alpha`) and per edge (rate 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ClockSet {
    alpha: f64,
    origin: Option<(u64, u64)>,
    vertex: Vec<f64>,
    edge: Vec<f64>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(PcfError::Parameter(format!("freeze rate must be positive and finite, got {alpha}")))
    }
}

impl ClockSet {
    /// Draw all clocks for `graph`, deterministically in `(seed, stream_id)`.
    pub fn sample(graph: &Graph, alpha: f64, seed: u64, stream_id: u64) -> Result<ClockSet> {
        check_alpha(alpha)?;
        let stream = ClockStream::new(seed, stream_id);
        Ok(ClockSet {
            alpha,
            origin: Some((seed, stream_id)),
            vertex: ClockStream::fill(&stream.vertex_rng, graph.vertex_count(), alpha),
            edge: ClockStream::fill(&stream.edge_rng, graph.edge_count(), 1.0),
        })
    }

    /// Clocks given explicitly, e.g. to force an event order in a test.
    pub fn from_values(alpha: f64, vertex: Vec<f64>, edge: Vec<f64>) -> Result<ClockSet> {
        check_alpha(alpha)?;
        if let Some(bad) = vertex.iter().chain(&edge).find(|x| !(**x > 0.0)) {
            return Err(PcfError::Parameter(format!("clock values must be positive, got {bad}")));
        }
        Ok(ClockSet {
            alpha,
            origin: None,
            vertex,
            edge,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `(seed, stream_id)` for sampled clocks, `None` for explicit ones.
    pub fn origin(&self) -> Option<(u64, u64)> {
        self.origin
    }

    pub fn vertex_clocks(&self) -> &[f64] {
        &self.vertex
    }

    pub fn edge_clocks(&self) -> &[f64] {
        &self.edge
    }

    pub fn vertex_clock(&self, v: usize) -> f64 {
        self.vertex[v]
    }

    pub fn edge_clock(&self, e: usize) -> f64 {
        self.edge[e]
    }

    pub(crate) fn check_sized_for(&self, graph: &Graph) -> Result<()> {
        if self.vertex.len() != graph.vertex_count() || self.edge.len() != graph.edge_count() {
            return Err(PcfError::Contract(format!(
                "clocks sized for {} vertices / {} edges, graph has {} / {}",
                self.vertex.len(),
                self.edge.len(),
                graph.vertex_count(),
                graph.edge_count()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clock_means() {
        let g = Graph::generic(1_000_000, &[], &[]).unwrap();
        let clocks = ClockSet::sample(&g, 2.0, 11, 0).unwrap();
        let mean = clocks.vertex_clocks().iter().sum::<f64>() / 1e6;
        assert!((mean - 0.5).abs() < 0.01, "{mean}");

        let g = Graph::grid(1000, 500).unwrap();
        let clocks = ClockSet::sample(&g, 1.0, 12, 3).unwrap();
        assert!(clocks.edge_clocks().len() > 998_000);
        let n = clocks.edge_clocks().len() as f64;
        let mean = clocks.edge_clocks().iter().sum::<f64>() / n;
        assert!((mean - 1.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn deterministic_per_seed_and_stream() {
        let g = Graph::grid(20, 20).unwrap();
        let a = ClockSet::sample(&g, 0.7, 5, 9).unwrap();
        let b = ClockSet::sample(&g, 0.7, 5, 9).unwrap();
        assert_eq!(a, b);
        let c = ClockSet::sample(&g, 0.7, 5, 10).unwrap();
        assert_ne!(a.edge_clocks(), c.edge_clocks());
        let d = ClockSet::sample(&g, 0.7, 6, 9).unwrap();
        assert_ne!(a.vertex_clocks(), d.vertex_clocks());
    }

    #[test]
    fn random_access_matches_bulk() {
        let g = Graph::grid(9, 7).unwrap();
        let clocks = ClockSet::sample(&g, 1.3, 77, 4).unwrap();
        let stream = ClockStream::new(77, 4);
        for v in 0..g.vertex_count() {
            assert_eq!(stream.vertex_clock(v as u64, 1.3), clocks.vertex_clock(v));
        }
        for e in 0..g.edge_count() {
            assert_eq!(stream.edge_clock(e as u64), clocks.edge_clock(e));
        }
    }

    #[test]
    fn clocks_strictly_positive() {
        assert!(unit_exponential(u64::MAX) > 0.0);
        assert!(unit_exponential(0).is_finite());
        let g = Graph::grid(50, 50).unwrap();
        let clocks = ClockSet::sample(&g, 3.0, 1, 1).unwrap();
        assert!(clocks.vertex_clocks().iter().chain(clocks.edge_clocks()).all(|&x| x > 0.0));
    }

    #[test]
    fn rejects_bad_alpha() {
        let g = Graph::grid(2, 2).unwrap();
        assert!(matches!(ClockSet::sample(&g, 0.0, 1, 1), Err(PcfError::Parameter(_))));
        assert!(matches!(ClockSet::sample(&g, -1.0, 1, 1), Err(PcfError::Parameter(_))));
        assert!(ClockSet::from_values(1.0, vec![0.0], vec![]).is_err());
    }
}
