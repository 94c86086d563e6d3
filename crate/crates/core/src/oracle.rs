//! Exact final distribution of PCF on tiny graphs.
//!
//! States are `(frozen vertex set, open edge set)` bitmasks. Every transition
//! adds an open edge or freezes a warm cluster, so the jump chain is acyclic
//! and absorption probabilities follow from one pass over a topological order.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::engine::Configuration;
use crate::error::{PcfError, Result};
use crate::graph::Graph;
use crate::stats::{map_replicas, BernoulliEstimate, ReplicaPlan};

/// Largest `vertex_count + edge_count` the oracle accepts.
pub const MAX_ELEMENTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub frozen: u16,
    pub open: u16,
}

impl State {
    fn order(self) -> u32 {
        self.frozen.count_ones() + self.open.count_ones()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// An edge opens at rate 1.
    Open(u8),
    /// A warm cluster (vertex mask) freezes at rate alpha.
    Freeze(u16),
}

#[derive(Debug, Clone)]
pub struct StateSpace {
    vertex_count: usize,
    edges: Vec<(u32, u32)>,
    states: Vec<State>,
    index: HashMap<State, usize>,
    moves: Vec<Vec<(Move, usize)>>,
}

/// Vertex masks of the clusters (components of open edges, singletons included).
fn clusters(vertex_count: usize, edges: &[(u32, u32)], open: u16) -> Vec<u16> {
    let mut comp: Vec<usize> = (0..vertex_count).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while c[x] != x {
            c[x] = c[c[x]];
            x = c[x];
        }
        x
    }
    for (e, &(u, v)) in edges.iter().enumerate() {
        if open >> e & 1 == 1 {
            let (a, b) = (find(&mut comp, u as usize), find(&mut comp, v as usize));
            comp[a] = b;
        }
    }
    let mut masks: HashMap<usize, u16> = HashMap::new();
    for v in 0..vertex_count {
        *masks.entry(find(&mut comp, v)).or_default() |= 1 << v;
    }
    let mut out: Vec<u16> = masks.into_values().collect();
    out.sort_unstable();
    out
}

fn successors(vertex_count: usize, edges: &[(u32, u32)], s: State) -> Vec<(Move, State)> {
    let mut out = Vec::new();
    for (e, &(u, v)) in edges.iter().enumerate() {
        let warm = |x: u32| s.frozen >> x & 1 == 0;
        if s.open >> e & 1 == 0 && warm(u) && warm(v) {
            out.push((
                Move::Open(e as u8),
                State {
                    frozen: s.frozen,
                    open: s.open | 1 << e,
                },
            ));
        }
    }
    for c in clusters(vertex_count, edges, s.open) {
        // clusters are uniformly warm or uniformly frozen
        if s.frozen & c == 0 {
            out.push((
                Move::Freeze(c),
                State {
                    frozen: s.frozen | c,
                    open: s.open,
                },
            ));
        }
    }
    out
}

/// Breadth-first closure of the PCF transitions from the all-warm, all-closed state.
pub fn enumerate_states(graph: &Graph) -> Result<StateSpace> {
    let (vertex_count, edges) = (graph.vertex_count(), graph.edges().to_vec());
    if vertex_count + edges.len() > MAX_ELEMENTS {
        return Err(PcfError::Capacity(format!(
            "{} vertices + {} edges exceeds the oracle cap of {MAX_ELEMENTS}",
            vertex_count,
            edges.len()
        )));
    }
    let start = State { frozen: 0, open: 0 };
    let mut states = vec![start];
    let mut index = HashMap::from([(start, 0)]);
    let mut raw_moves = vec![Vec::new()];
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let next = successors(vertex_count, &edges, states[i]);
        let mut here = Vec::with_capacity(next.len());
        for (m, s) in next {
            let j = *index.entry(s).or_insert_with(|| {
                states.push(s);
                raw_moves.push(Vec::new());
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            here.push((m, j));
        }
        raw_moves[i] = here;
    }
    Ok(StateSpace {
        vertex_count,
        edges,
        states,
        index,
        moves: raw_moves,
    })
}

impl StateSpace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> State {
        self.states[i]
    }

    pub fn moves(&self, i: usize) -> &[(Move, usize)] {
        &self.moves[i]
    }

    pub fn is_absorbing(&self, i: usize) -> bool {
        self.moves[i].is_empty()
    }

    pub fn absorbing(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.is_absorbing(i))
    }

    pub fn configuration(&self, i: usize) -> Configuration {
        let s = self.states[i];
        Configuration::from_parts(
            (0..self.edges.len()).map(|e| s.open >> e & 1 == 1).collect(),
            (0..self.vertex_count).map(|v| s.frozen >> v & 1 == 1).collect(),
            f64::INFINITY,
        )
    }

    /// Ordinal of the state matching `config`, if it is reachable.
    pub fn index_of(&self, config: &Configuration) -> Option<usize> {
        if config.edge_states().len() != self.edges.len()
            || config.vertex_states().len() != self.vertex_count
        {
            return None;
        }
        let mask = |bits: &[bool]| {
            bits.iter()
                .enumerate()
                .fold(0u16, |m, (i, &b)| m | (u16::from(b) << i))
        };
        let s = State {
            frozen: mask(config.vertex_states()),
            open: mask(config.edge_states()),
        };
        self.index.get(&s).copied()
    }

    /// Jump-chain probabilities out of state `i` at freeze rate `alpha`.
    pub fn jump_probabilities(&self, i: usize, alpha: f64) -> Vec<(usize, f64)> {
        let rate = |m: &Move| match m {
            Move::Open(_) => 1.0,
            Move::Freeze(_) => alpha,
        };
        let total: f64 = self.moves[i].iter().map(|(m, _)| rate(m)).sum();
        self.moves[i]
            .iter()
            .map(|(m, j)| (*j, rate(m) / total))
            .collect()
    }
}

/// Probability of each absorbing state, indexed by state ordinal.
#[derive(Debug, Clone)]
pub struct FinalDistribution {
    probability: Vec<(usize, f64)>,
}

impl FinalDistribution {
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probability.iter().copied()
    }

    pub fn get(&self, state: usize) -> f64 {
        self.probability
            .iter()
            .find(|(i, _)| *i == state)
            .map_or(0.0, |&(_, p)| p)
    }

    pub fn total(&self) -> f64 {
        self.probability.iter().map(|(_, p)| p).sum()
    }
}

/// Absorption probabilities of the embedded jump chain.
pub fn final_distribution(space: &StateSpace, alpha: f64) -> Result<FinalDistribution> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(PcfError::Parameter(format!("freeze rate must be positive, got {alpha}")));
    }
    let mut order: Vec<usize> = (0..space.len()).collect();
    order.sort_by_key(|&i| space.states[i].order());
    let mut mass = vec![0.0; space.len()];
    mass[0] = 1.0;
    for &i in &order {
        if mass[i] == 0.0 || space.is_absorbing(i) {
            continue;
        }
        let jumps = space.jump_probabilities(i, alpha);
        let out: f64 = jumps.iter().map(|(_, p)| p).sum();
        if (out - 1.0).abs() > 1e-12 {
            return Err(PcfError::Domain(format!(
                "jump probabilities out of state {i} sum to {out}"
            )));
        }
        for (j, p) in jumps {
            debug_assert!(space.states[j].order() > space.states[i].order());
            mass[j] += mass[i] * p;
        }
    }
    Ok(FinalDistribution {
        probability: space.absorbing().map(|i| (i, mass[i])).collect(),
    })
}

/// Total final probability of the absorbing states satisfying `predicate`.
pub fn marginal<F>(dist: &FinalDistribution, space: &StateSpace, predicate: F) -> f64
where
    F: Fn(&Configuration) -> bool,
{
    dist.iter()
        .filter(|&(i, _)| predicate(&space.configuration(i)))
        .map(|(_, p)| p)
        .sum()
}

/// Small named graphs for oracle checks: `single-edge`, `p3`, `p4`, `c3`,
/// `c4`, `s3` (star with three leaves).
pub fn named_graph(name: &str) -> Result<Graph> {
    let edges: &[(u32, u32)] = match name {
        "single-edge" | "k2" => &[(0, 1)],
        "p3" => &[(0, 1), (1, 2)],
        "p4" => &[(0, 1), (1, 2), (2, 3)],
        "c3" => &[(0, 1), (1, 2), (2, 0)],
        "c4" => &[(0, 1), (1, 2), (2, 3), (3, 0)],
        "s3" => &[(0, 1), (0, 2), (0, 3)],
        _ => {
            return Err(PcfError::Parameter(format!(
                "unknown graph {name:?}; expected single-edge, p3, p4, c3, c4 or s3"
            )))
        }
    };
    let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    Graph::generic(n, edges, &[])
}

/// Exact and simulated probability of one absorbing state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StateComparison {
    pub state: usize,
    pub frozen: u16,
    pub open: u16,
    pub exact: f64,
    pub estimate: BernoulliEstimate,
    /// `(estimate - exact) / sqrt(exact (1 - exact) / trials)`; zero when exact is 0 or 1.
    pub z: f64,
}

/// Run `replicas` engine replicas (streams `0..replicas` of `seed`) and
/// compare the final-state frequencies with the exact distribution.
pub fn compare_with_engine(
    graph: &Graph,
    alpha: f64,
    replicas: u64,
    seed: u64,
) -> Result<Vec<StateComparison>> {
    let space = enumerate_states(graph)?;
    let dist = final_distribution(&space, alpha)?;
    let plan = ReplicaPlan::new(graph, alpha, replicas, seed);
    let finals = map_replicas(&plan, |_, r| space.index_of(&r.final_config))?;
    let mut counts = HashMap::new();
    for f in finals {
        let i = f.ok_or_else(|| PcfError::Contract("engine reached a state the oracle cannot".into()))?;
        *counts.entry(i).or_insert(0u64) += 1;
    }
    let mut out: Vec<StateComparison> = space
        .absorbing()
        .map(|i| {
            let exact = dist.get(i);
            let estimate = BernoulliEstimate::new(counts.get(&i).copied().unwrap_or(0), replicas);
            let sd = (exact * (1.0 - exact) / replicas as f64).sqrt();
            let z = if sd > 0.0 { (estimate.p_hat - exact) / sd } else { 0.0 };
            let st = space.state(i);
            StateComparison {
                state: i,
                frozen: st.frozen,
                open: st.open,
                exact,
                estimate,
                z,
            }
        })
        .collect();
    out.sort_by_key(|c| (c.open, c.frozen));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_edge() -> Graph {
        Graph::generic(2, &[(0, 1)], &[]).unwrap()
    }

    fn path3() -> Graph {
        Graph::generic(3, &[(0, 1), (1, 2)], &[]).unwrap()
    }

    #[test]
    fn single_vertex() {
        let g = Graph::generic(1, &[], &[]).unwrap();
        let space = enumerate_states(&g).unwrap();
        assert_eq!(space.len(), 2);
        let dist = final_distribution(&space, 1.0).unwrap();
        assert!((marginal(&dist, &space, |c| c.is_frozen(0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_edge_states_and_law() {
        let space = enumerate_states(&single_edge()).unwrap();
        // ww-closed, fw-closed, wf-closed, ff-closed, ww-open, ff-open
        assert_eq!(space.len(), 6);
        assert_eq!(space.absorbing().count(), 2);
        for alpha in [0.25, 1.0, 4.0, 1e-3] {
            let dist = final_distribution(&space, alpha).unwrap();
            let open = marginal(&dist, &space, |c| c.is_open(0));
            assert!((open - 1.0 / (1.0 + 2.0 * alpha)).abs() < 1e-14);
            assert!((dist.total() - 1.0).abs() < 1e-12);
        }
        let dist = final_distribution(&space, 1.0).unwrap();
        assert!((marginal(&dist, &space, |c| c.is_open(0)) - 1.0 / 3.0).abs() < 1e-15);
        let dist = final_distribution(&space, 1e9).unwrap();
        assert!(marginal(&dist, &space, |c| c.is_open(0)) < 1e-8);
    }

    #[test]
    fn trivial_predicates() {
        let space = enumerate_states(&path3()).unwrap();
        let dist = final_distribution(&space, 1.0).unwrap();
        assert!((marginal(&dist, &space, |_| true) - 1.0).abs() < 1e-12);
        assert_eq!(marginal(&dist, &space, |_| false), 0.0);
    }

    /// Hand enumeration of P3 (edges a=01, b=12). Starting from the empty
    /// state, every reachable pattern is (frozen set, open set) with each
    /// cluster uniformly warm or frozen:
    /// open {}      : frozen subsets of {0,1,2}          -> 8 states
    /// open {a}     : clusters {01},{2}: 2x2 patterns    -> 4 states
    /// open {b}     : clusters {0},{12}                  -> 4 states
    /// open {a,b}   : single cluster warm or frozen      -> 2 states
    /// Opening a with 2 frozen or b with 0 frozen is allowed, so all 18 appear.
    #[test]
    fn path3_state_count() {
        let space = enumerate_states(&path3()).unwrap();
        assert_eq!(space.len(), 18);
        assert_eq!(space.absorbing().count(), 4);
    }

    /// P3 both-open probability by conditioning on the first jump, computed by hand:
    /// from the empty state rates are 1, 1 (edges) and 3 alpha (singletons).
    #[test]
    fn path3_both_open_closed_form() {
        for alpha in [0.25f64, 1.0, 4.0] {
            // after edge a opens: clusters {01} and {2}, rates b:1, 2 alpha
            // b opens with prob 1/(1+2a); then nothing else can open.
            let after_one = 1.0 / (1.0 + 2.0 * alpha);
            let both = 2.0 / (2.0 + 3.0 * alpha) * after_one;
            let space = enumerate_states(&path3()).unwrap();
            let dist = final_distribution(&space, alpha).unwrap();
            let got = marginal(&dist, &space, |c| c.is_open(0) && c.is_open(1));
            assert!((got - both).abs() < 1e-14, "{got} vs {both}");
        }
    }

    #[test]
    fn transitions_are_acyclic_and_conservative() {
        let c4 = Graph::generic(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[]).unwrap();
        let space = enumerate_states(&c4).unwrap();
        for i in 0..space.len() {
            for &(_, j) in space.moves(i) {
                assert!(space.state(j).order() > space.state(i).order());
            }
            if !space.is_absorbing(i) {
                let total: f64 = space.jump_probabilities(i, 0.7).iter().map(|x| x.1).sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
        // absorbing iff every vertex frozen
        for i in space.absorbing() {
            assert_eq!(space.state(i).frozen, 0b1111);
        }
    }

    #[test]
    fn capacity_limit() {
        let g = Graph::grid(3, 3).unwrap();
        assert!(matches!(enumerate_states(&g), Err(PcfError::Capacity(_))));
    }
}
