use std::fmt;
use std::io::{self, Write};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::clocks::ClockSet;
use super::config::Configuration;
use super::forest::ClusterForest;
use crate::error::{PcfError, Result};
use crate::graph::{Graph, PriorityOrder, Subgraph};

/// Which process the engine runs on the shared clocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Free-boundary PCF: every cluster freezes at its label's clock.
    Pcf,
    /// Clusters touching the boundary never freeze.
    Warm,
    /// No freezing at all; edges open at their clocks.
    Percolation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Edge,
    Vertex,
}

/// One state-changing event, as written to trajectory dumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub time: f64,
    pub kind: EventKind,
    pub index: u32,
    /// Label vertex of the affected component after the event.
    pub label: u32,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            EventKind::Edge => "edge",
            EventKind::Vertex => "vertex",
        };
        write!(f, "{} {} {} {}", self.time, kind, self.index, self.label)
    }
}

/// Write a trajectory, one `t kind index component_label` line per event.
pub fn write_trace<W: Write>(mut out: W, trace: &[TraceEvent]) -> io::Result<()> {
    for event in trace {
        writeln!(out, "{event}")?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_config: Configuration,
    /// Vertex counts of all components, singletons included.
    pub cluster_sizes: Vec<u32>,
    /// Size of the component of vertex 0 (the root, for trees).
    pub root_cluster_size: u32,
    /// Whether the component of vertex 0 contains a boundary vertex.
    pub root_touched_boundary: bool,
    /// Number of events that changed the state.
    pub event_count: u64,
    pub wall_time: f64,
    pub trace: Option<Vec<TraceEvent>>,
}

impl RunResult {
    /// Summarize a configuration produced outside the event loop.
    pub fn from_configuration(graph: &Graph, config: Configuration, wall_time: f64) -> RunResult {
        let comp = config.components(graph);
        let mut sizes = vec![0u32; comp.iter().map(|&c| c as usize + 1).max().unwrap_or(0)];
        for &c in &comp {
            sizes[c as usize] += 1;
        }
        let root = comp.first().map(|&c| c as usize);
        let root_touched_boundary = root.is_some_and(|r| {
            comp.iter()
                .enumerate()
                .any(|(v, &c)| c as usize == r && graph.is_boundary(v))
        });
        RunResult {
            root_cluster_size: root.map_or(0, |r| sizes[r]),
            root_touched_boundary,
            event_count: config.open_count() as u64,
            cluster_sizes: sizes,
            final_config: config,
            wall_time,
            trace: None,
        }
    }

    pub fn largest_cluster(&self) -> u32 {
        self.cluster_sizes.iter().copied().max().unwrap_or(0)
    }
}

/// Builder for one engine run over shared clocks.
#[derive(Debug, Clone)]
pub struct Simulation<'a> {
    graph: &'a Graph,
    priority: &'a PriorityOrder,
    clocks: &'a ClockSet,
    variant: Variant,
    subgraph: Option<&'a Subgraph>,
    t_max: f64,
    record_trace: bool,
}

impl<'a> Simulation<'a> {
    pub fn new(graph: &'a Graph, priority: &'a PriorityOrder, clocks: &'a ClockSet) -> Self {
        Simulation {
            graph,
            priority,
            clocks,
            variant: Variant::Pcf,
            subgraph: None,
            t_max: f64::INFINITY,
            record_trace: false,
        }
    }

    pub fn variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    /// Restrict the run to a subgraph of the clocks' graph. For the warm
    /// variant the boundary becomes [`Subgraph::boundary_in`].
    pub fn subgraph(mut self, subgraph: &'a Subgraph) -> Self {
        self.subgraph = Some(subgraph);
        self
    }

    pub fn t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn record_trace(mut self, record: bool) -> Self {
        self.record_trace = record;
        self
    }

    pub fn start(self) -> Result<Run<'a>> {
        Run::new(self)
    }

    pub fn run(self) -> Result<RunResult> {
        Ok(self.start()?.finish())
    }
}

const VERTEX_TAG: u64 = 1 << 32;

/// Sort key: time first, then edges before vertices, then index.
/// Clock values are positive, so their IEEE bit patterns order like the values.
#[inline]
fn event_key(time: f64, tag: u64, index: usize) -> u128 {
    (u128::from(time.to_bits()) << 64) | u128::from(tag | index as u64)
}

/// An in-progress run that can be stepped event by event.
pub struct Run<'a> {
    graph: &'a Graph,
    priority: &'a PriorityOrder,
    variant: Variant,
    t_max: f64,
    events: Vec<u128>,
    cursor: usize,
    forest: ClusterForest,
    edge_open: Vec<bool>,
    active_vertex: Option<Vec<bool>>,
    active_edge: Option<Vec<bool>>,
    time: f64,
    event_count: u64,
    trace: Option<Vec<TraceEvent>>,
    started: Instant,
}

impl<'a> Run<'a> {
    fn new(sim: Simulation<'a>) -> Result<Run<'a>> {
        let started = Instant::now();
        let graph = sim.graph;
        sim.clocks.check_sized_for(graph)?;
        if sim.priority.len() != graph.vertex_count() {
            return Err(PcfError::Contract(format!(
                "priority order has {} entries, graph has {} vertices",
                sim.priority.len(),
                graph.vertex_count()
            )));
        }
        if sim.t_max.is_nan() || sim.t_max < 0.0 {
            return Err(PcfError::Parameter(format!("t_max must be >= 0, got {}", sim.t_max)));
        }
        if let Some(sub) = sim.subgraph {
            if sub.vertex_mask().len() != graph.vertex_count() {
                return Err(PcfError::Contract("subgraph belongs to another graph".into()));
            }
        }

        let boundary = match sim.subgraph {
            Some(sub) => sub.boundary_in(graph),
            None => graph.boundary_mask().to_vec(),
        };
        let forest = ClusterForest::new(graph.vertex_count(), &boundary);

        let t_max = sim.t_max;
        let vclock = sim.clocks.vertex_clocks();
        let eclock = sim.clocks.edge_clocks();
        let mut events = Vec::new();
        let (active_vertex, active_edge) = match sim.subgraph {
            None => {
                events.reserve(vclock.len() + eclock.len());
                if sim.variant != Variant::Percolation {
                    events.extend(
                        vclock
                            .iter()
                            .enumerate()
                            .filter(|(_, &t)| t <= t_max)
                            .map(|(v, &t)| event_key(t, VERTEX_TAG, v)),
                    );
                }
                events.extend(
                    eclock
                        .iter()
                        .enumerate()
                        .filter(|(_, &t)| t <= t_max)
                        .map(|(e, &t)| event_key(t, 0, e)),
                );
                (None, None)
            }
            Some(sub) => {
                let mut edge_mask = vec![false; graph.edge_count()];
                for &e in sub.edges() {
                    edge_mask[e as usize] = true;
                    if eclock[e as usize] <= t_max {
                        events.push(event_key(eclock[e as usize], 0, e as usize));
                    }
                }
                if sim.variant != Variant::Percolation {
                    for (v, &inside) in sub.vertex_mask().iter().enumerate() {
                        if inside && vclock[v] <= t_max {
                            events.push(event_key(vclock[v], VERTEX_TAG, v));
                        }
                    }
                }
                (Some(sub.vertex_mask().to_vec()), Some(edge_mask))
            }
        };
        events.sort_unstable();

        Ok(Run {
            graph,
            priority: sim.priority,
            variant: sim.variant,
            t_max,
            events,
            cursor: 0,
            forest,
            edge_open: vec![false; graph.edge_count()],
            active_vertex,
            active_edge,
            time: 0.0,
            event_count: 0,
            trace: sim.record_trace.then(Vec::new),
            started,
        })
    }

    /// Time of the next pending clock, if any remain.
    pub fn next_event_time(&self) -> Option<f64> {
        self.events
            .get(self.cursor)
            .map(|&key| f64::from_bits((key >> 64) as u64))
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Process the next clock. Returns its time, or `None` when all clocks are spent.
    pub fn step(&mut self) -> Option<f64> {
        let key = *self.events.get(self.cursor)?;
        self.cursor += 1;
        let time = f64::from_bits((key >> 64) as u64);
        let low = key as u64;
        let index = (low & 0xFFFF_FFFF) as usize;
        self.time = time;
        if low & VERTEX_TAG != 0 {
            self.vertex_event(time, index);
        } else {
            self.edge_event(time, index);
        }
        Some(time)
    }

    /// Process every clock with time `<= t`.
    pub fn advance_to(&mut self, t: f64) {
        while let Some(next) = self.next_event_time() {
            if next > t {
                break;
            }
            self.step();
        }
        if t > self.time {
            self.time = t.min(self.t_max);
        }
    }

    fn edge_event(&mut self, time: f64, e: usize) {
        let (u, v) = self.graph.edge(e);
        let ru = self.forest.find(u as usize);
        let rv = self.forest.find(v as usize);
        if self.variant != Variant::Percolation
            && (self.forest.is_frozen(ru) || self.forest.is_frozen(rv))
        {
            return;
        }
        self.edge_open[e] = true;
        let root = if ru == rv {
            ru
        } else {
            self.forest.union_roots(ru, rv, self.priority)
        };
        self.event_count += 1;
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceEvent {
                time,
                kind: EventKind::Edge,
                index: e as u32,
                label: self.forest.label(root),
            });
        }
    }

    fn vertex_event(&mut self, time: f64, v: usize) {
        let root = self.forest.find(v);
        // Only the label's clock can freeze a component. A label's clock has never
        // fired while it was a label (otherwise the component would be frozen), and a
        // vertex that loses label status never regains it, so each warm component is
        // governed by one unfired Exp(alpha) clock: freezing at rate alpha per cluster
        // without ever resampling on merge.
        if self.forest.is_frozen(root) || self.forest.label(root) as usize != v {
            return;
        }
        if self.variant == Variant::Warm && self.forest.touches_boundary(root) {
            return;
        }
        self.forest.freeze(root);
        self.event_count += 1;
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceEvent {
                time,
                kind: EventKind::Vertex,
                index: v as u32,
                label: v as u32,
            });
        }
    }

    /// Snapshot of the current state in the coordinates of the whole graph.
    ///
    /// Outside a subgraph, PCF and percolation runs report vertices frozen and
    /// edges closed; warm runs report vertices warm and edges open.
    pub fn configuration(&self) -> Configuration {
        let n = self.graph.vertex_count();
        let outside_warm = self.variant == Variant::Warm;
        let vertex_frozen = (0..n)
            .map(|v| {
                if self.active_vertex.as_ref().is_some_and(|mask| !mask[v]) {
                    self.variant == Variant::Pcf
                } else {
                    self.forest.is_frozen(self.forest.find_immutable(v))
                }
            })
            .collect();
        let edge_open = match &self.active_edge {
            None => self.edge_open.clone(),
            Some(mask) => self
                .edge_open
                .iter()
                .zip(mask)
                .map(|(&open, &inside)| if inside { open } else { outside_warm })
                .collect(),
        };
        Configuration::from_parts(edge_open, vertex_frozen, self.time)
    }

    /// Component sizes of the vertices taking part in the run.
    pub fn cluster_sizes(&self) -> Vec<u32> {
        (0..self.graph.vertex_count())
            .filter(|&v| self.active_vertex.as_ref().is_none_or(|mask| mask[v]))
            .filter(|&v| self.forest.find_immutable(v) == v)
            .map(|v| self.forest.size(v))
            .collect()
    }

    pub fn forest(&self) -> &ClusterForest {
        &self.forest
    }

    /// Run the remaining clocks and collect the result.
    pub fn finish(mut self) -> RunResult {
        let mut last = self.time;
        while let Some(t) = self.step() {
            last = t;
        }
        self.time = if self.t_max.is_finite() { self.t_max } else { last };
        let root = self.forest.find(0);
        RunResult {
            final_config: self.configuration(),
            cluster_sizes: self.cluster_sizes(),
            root_cluster_size: self.forest.size(root),
            root_touched_boundary: self.forest.touches_boundary(root),
            event_count: self.event_count,
            wall_time: self.started.elapsed().as_secs_f64(),
            trace: self.trace,
        }
    }
}

/// Free-boundary PCF up to `t_max` (use `f64::INFINITY` to run to absorption).
pub fn run_pcf(
    graph: &Graph,
    priority: &PriorityOrder,
    clocks: &ClockSet,
    t_max: f64,
) -> Result<RunResult> {
    Simulation::new(graph, priority, clocks).t_max(t_max).run()
}

/// Warm PCF: components containing a boundary vertex never freeze.
pub fn run_warm_pcf(
    graph: &Graph,
    priority: &PriorityOrder,
    clocks: &ClockSet,
    t_max: f64,
) -> Result<RunResult> {
    Simulation::new(graph, priority, clocks)
        .variant(Variant::Warm)
        .t_max(t_max)
        .run()
}

/// Bond percolation at time `t`: edge `e` is open iff its clock is `<= t`.
pub fn run_percolation(graph: &Graph, clocks: &ClockSet, t: f64) -> Result<Configuration> {
    clocks.check_sized_for(graph)?;
    if t.is_nan() || t < 0.0 {
        return Err(PcfError::Parameter(format!("time must be >= 0, got {t}")));
    }
    let open = clocks.edge_clocks().iter().map(|&x| x <= t).collect();
    Ok(Configuration::from_parts(open, vec![false; graph.vertex_count()], t))
}

/// Run `variant` on each subgraph with the clocks sampled on the whole graph.
pub fn run_coupled(
    graph: &Graph,
    subgraphs: &[Subgraph],
    priority: &PriorityOrder,
    clocks: &ClockSet,
    variant: Variant,
) -> Result<Vec<RunResult>> {
    subgraphs
        .iter()
        .map(|sub| {
            Simulation::new(graph, priority, clocks)
                .variant(variant)
                .subgraph(sub)
                .run()
        })
        .collect()
}
