use serde::{Deserialize, Serialize};

use super::bernoulli::BernoulliEstimate;
use super::replicas::{map_replicas, ReplicaPlan, ReplicaVariant};
use crate::engine::Configuration;
use crate::error::{PcfError, Result};
use crate::graph::{Graph, GraphKind};

/// Whether open edges join the left column to the right column of a grid.
/// A single-column grid counts as crossed.
pub fn has_lr_crossing(config: &Configuration, grid: &Graph) -> Result<bool> {
    let GraphKind::Grid { width, height } = grid.kind() else {
        return Err(PcfError::Contract("left-right crossing needs a grid".into()));
    };
    if config.edge_states().len() != grid.edge_count() {
        return Err(PcfError::Contract(format!(
            "configuration has {} edges, grid has {}",
            config.edge_states().len(),
            grid.edge_count()
        )));
    }
    if width <= 1 {
        return Ok(true);
    }
    let (w, n) = (width as usize, grid.vertex_count());
    // two extra nodes: left terminal n, right terminal n + 1
    let mut parent: Vec<u32> = (0..n as u32 + 2).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let up = parent[parent[x as usize] as usize];
            parent[x as usize] = up;
            x = up;
        }
        x
    }
    let union = |parent: &mut Vec<u32>, a: u32, b: u32| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra.max(rb) as usize] = ra.min(rb);
        }
    };
    for y in 0..height as usize {
        union(&mut parent, n as u32, (y * w) as u32);
        union(&mut parent, n as u32 + 1, (y * w + w - 1) as u32);
    }
    for (e, &(a, b)) in grid.edges().iter().enumerate() {
        if config.is_open(e) {
            union(&mut parent, a, b);
        }
    }
    Ok(find(&mut parent, n as u32) == find(&mut parent, n as u32 + 1))
}

/// Process whose final configuration is tested for a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum CrossingMode {
    /// PCF with freeze rate `alpha`, run to absorption.
    Pcf { alpha: f64 },
    /// Bond percolation at time `t`, i.e. edge density `1 - e^{-t}`.
    Percolation { t: f64 },
}

/// The `(n+1)`-wide, `n`-tall grid crossed along its width.
pub fn crossing_grid(n: u32) -> Result<Graph> {
    if n < 2 {
        return Err(PcfError::Parameter(format!("crossing grid needs n >= 2, got {n}")));
    }
    Graph::grid(n + 1, n)
}

/// Crossing frequency over `replicas` runs on [`crossing_grid`]`(n)`, using
/// streams `first_stream..first_stream + replicas`.
pub fn estimate_crossing(
    n: u32,
    mode: CrossingMode,
    replicas: u64,
    base_seed: u64,
    first_stream: u64,
    threads: Option<usize>,
) -> Result<BernoulliEstimate> {
    let grid = crossing_grid(n)?;
    estimate_crossing_on(&grid, mode, replicas, base_seed, first_stream, threads)
}

pub(crate) fn estimate_crossing_on(
    grid: &Graph,
    mode: CrossingMode,
    replicas: u64,
    base_seed: u64,
    first_stream: u64,
    threads: Option<usize>,
) -> Result<BernoulliEstimate> {
    let (alpha, variant) = match mode {
        CrossingMode::Pcf { alpha } => (alpha, ReplicaVariant::Pcf),
        CrossingMode::Percolation { t } => (1.0, ReplicaVariant::Percolation { t }),
    };
    let plan = ReplicaPlan::new(grid, alpha, replicas, base_seed)
        .variant(variant)
        .first_stream(first_stream)
        .threads(threads);
    let hits = map_replicas(&plan, |_, r| has_lr_crossing(&r.final_config, grid))?;
    let mut successes = 0;
    for h in hits {
        successes += u64::from(h?);
    }
    Ok(BernoulliEstimate::new(successes, replicas))
}

/// Crossing probability of PCF at rate `alpha` on the `(n+1) x n` grid.
pub fn estimate_crossing_prob(
    n: u32,
    alpha: f64,
    replicas: u64,
    base_seed: u64,
) -> Result<BernoulliEstimate> {
    estimate_crossing(n, CrossingMode::Pcf { alpha }, replicas, base_seed, 0, None)
}

/// One row of a crossing curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingPoint {
    pub alpha: f64,
    pub n: u32,
    pub estimate: BernoulliEstimate,
}

/// Crossing estimates for every `(alpha, n)` pair, alphas varying fastest.
pub fn crossing_curve(
    alphas: &[f64],
    sizes: &[u32],
    replicas: u64,
    base_seed: u64,
    threads: Option<usize>,
) -> Result<Vec<CrossingPoint>> {
    let mut out = Vec::with_capacity(alphas.len() * sizes.len());
    for &n in sizes {
        let grid = crossing_grid(n)?;
        for &alpha in alphas {
            let estimate =
                estimate_crossing_on(&grid, CrossingMode::Pcf { alpha }, replicas, base_seed, 0, threads)?;
            out.push(CrossingPoint { alpha, n, estimate });
        }
    }
    Ok(out)
}

/// Writes `alpha,n,trials,successes,p_hat,ci_low,ci_high` rows.
pub fn write_crossing_csv<W: std::io::Write>(points: &[CrossingPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["alpha", "n", "trials", "successes", "p_hat", "ci_low", "ci_high"])
        .map_err(crate::tree::csv_err)?;
    for p in points {
        let e = &p.estimate;
        w.write_record([
            p.alpha.to_string(),
            p.n.to_string(),
            e.trials.to_string(),
            e.successes.to_string(),
            e.p_hat.to_string(),
            e.ci_low.to_string(),
            e.ci_high.to_string(),
        ])
        .map_err(crate::tree::csv_err)?;
    }
    w.flush()?;
    Ok(())
}
