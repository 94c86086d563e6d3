use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{run_percolation, ClockSet, RunResult, Simulation, Variant};
use crate::error::{PcfError, Result};
use crate::graph::{Graph, PriorityOrder};

/// Process run by each replica.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant")]
pub enum ReplicaVariant {
    Pcf,
    Warm,
    /// Bond percolation read off the edge clocks at time `t`.
    Percolation { t: f64 },
}

/// A batch of independent runs on one graph. Replica `i` draws its clocks
/// from stream `first_stream + i` of `base_seed`.
#[derive(Debug, Clone)]
pub struct ReplicaPlan<'g> {
    pub graph: &'g Graph,
    pub alpha: f64,
    pub replicas: u64,
    pub base_seed: u64,
    pub first_stream: u64,
    pub variant: ReplicaVariant,
    /// Stop time for PCF and warm runs; infinite runs to absorption.
    pub t_max: f64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl<'g> ReplicaPlan<'g> {
    pub fn new(graph: &'g Graph, alpha: f64, replicas: u64, base_seed: u64) -> ReplicaPlan<'g> {
        ReplicaPlan {
            graph,
            alpha,
            replicas,
            base_seed,
            first_stream: 0,
            variant: ReplicaVariant::Pcf,
            t_max: f64::INFINITY,
            threads: None,
        }
    }

    pub fn variant(mut self, variant: ReplicaVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn first_stream(mut self, first_stream: u64) -> Self {
        self.first_stream = first_stream;
        self
    }

    pub fn threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.replicas == 0 {
            return Err(PcfError::Parameter("replicas must be >= 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(PcfError::Parameter(format!(
                "freeze rate must be positive, got {}",
                self.alpha
            )));
        }
        if let ReplicaVariant::Percolation { t } = self.variant {
            if t.is_nan() || t < 0.0 {
                return Err(PcfError::Parameter(format!("time must be >= 0, got {t}")));
            }
        }
        Ok(())
    }

    /// Run replica `index` (0-based within the plan).
    pub fn run_one(&self, index: u64, priority: &PriorityOrder) -> Result<RunResult> {
        let stream = self.first_stream + index;
        let clocks = ClockSet::sample(self.graph, self.alpha, self.base_seed, stream)?;
        match self.variant {
            ReplicaVariant::Pcf => Simulation::new(self.graph, priority, &clocks)
                .t_max(self.t_max)
                .run(),
            ReplicaVariant::Warm => Simulation::new(self.graph, priority, &clocks)
                .variant(Variant::Warm)
                .t_max(self.t_max)
                .run(),
            ReplicaVariant::Percolation { t } => {
                let start = Instant::now();
                let config = run_percolation(self.graph, &clocks, t)?;
                Ok(RunResult::from_configuration(self.graph, config, start.elapsed().as_secs_f64()))
            }
        }
    }
}

/// Apply `f` to every replica and return the outputs in replica order.
/// Output is independent of thread count and scheduling.
pub fn map_replicas<T, F>(plan: &ReplicaPlan<'_>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, RunResult) -> T + Sync,
{
    plan.validate()?;
    let priority = PriorityOrder::for_graph(plan.graph);
    let work = || {
        (0..plan.replicas)
            .into_par_iter()
            .map(|i| plan.run_one(i, &priority).map(|r| f(i, r)))
            .collect::<Result<Vec<T>>>()
    };
    match plan.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| PcfError::Parameter(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

/// All replica results in order. Holds every final configuration in memory;
/// use [`map_replicas`] to reduce large runs on the fly.
pub fn run_replicas(plan: &ReplicaPlan<'_>) -> Result<Vec<RunResult>> {
    map_replicas(plan, |_, r| r)
}
