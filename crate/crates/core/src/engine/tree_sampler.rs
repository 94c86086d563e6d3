//! Root-cluster sampling on a truncated rooted d-ary tree without
//! materializing the tree.
//!
//! With breadth-first priorities every cluster hanging below a vertex `c` is
//! labelled by `c` until the edge above `c` opens, and the cluster containing
//! a vertex `u` at time `t` is labelled by the highest ancestor joined to `u`
//! by edges with earlier clocks. So the fate of an edge below the root
//! cluster depends only on clocks along its root path and on the child's own
//! clock. Exploring the root cluster depth-first therefore reproduces
//! free-boundary PCF on the truncated tree exactly (same event order, same
//! tie-breaking) while reading only the clocks of the cluster and its outer
//! boundary. Clocks come from the same counter-based stream as
//! [`ClockSet::sample`](super::ClockSet::sample), so results match a full
//! engine run clock for clock.

use super::clocks::ClockStream;
use crate::error::{PcfError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeRootSample {
    /// Root-cluster size; a lower bound when `touched_boundary` or `truncated`.
    pub size: u64,
    /// The root cluster reached the depth-`depth` leaves; exploration stopped there.
    pub touched_boundary: bool,
    /// Exploration stopped after exceeding the size cap.
    pub truncated: bool,
}

impl TreeRootSample {
    /// Exact size of a root cluster that stayed inside the truncated tree.
    pub fn exact_size(&self) -> Option<u64> {
        (!self.touched_boundary && !self.truncated).then_some(self.size)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TreeRootSampler {
    d: u64,
    depth: u32,
    alpha: f64,
    max_size: u64,
}

#[derive(Clone, Copy)]
struct PathNode {
    vertex_clock: f64,
    // (clock, edge index) of the edge to the parent; unused for the root
    parent_edge: (f64, u64),
}

impl TreeRootSampler {
    pub fn new(d: u32, depth: u32, alpha: f64, max_size: u64) -> Result<TreeRootSampler> {
        if d < 2 {
            return Err(PcfError::Parameter(format!("branching factor must be >= 2, got {d}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(PcfError::Parameter(format!("freeze rate must be positive, got {alpha}")));
        }
        if crate::graph::tree_vertex_count(u64::from(d), depth).is_none_or(|n| n >= 1 << 62) {
            return Err(PcfError::Size(format!("d={d}, depth={depth} overflows vertex indices")));
        }
        Ok(TreeRootSampler {
            d: u64::from(d),
            depth,
            alpha,
            max_size: max_size.max(1),
        })
    }

    pub fn sample(&self, clocks: &ClockStream) -> TreeRootSample {
        let mut state = TreeRootSample {
            size: 1,
            touched_boundary: self.depth == 0,
            truncated: false,
        };
        if self.depth == 0 {
            return state;
        }
        let mut path = vec![PathNode {
            vertex_clock: clocks.vertex_clock(0, self.alpha),
            parent_edge: (0.0, 0),
        }];
        self.explore(0, 0, &mut path, clocks, &mut state);
        state
    }

    /// Returns `false` once exploration must stop.
    fn explore(
        &self,
        vertex: u64,
        level: u32,
        path: &mut Vec<PathNode>,
        clocks: &ClockStream,
        state: &mut TreeRootSample,
    ) -> bool {
        for j in 0..self.d {
            let child = self.d * vertex + 1 + j;
            let edge = child - 1;
            let key = (clocks.edge_clock(edge), edge);
            // Highest ancestor joined to `vertex` when this edge's clock rings.
            let mut top = path.len() - 1;
            while top > 0 && path[top].parent_edge < key {
                top -= 1;
            }
            // Edges go before vertices at equal times, so a tie leaves the vertex warm.
            if path[top].vertex_clock < key.0 {
                continue;
            }
            let child_clock = clocks.vertex_clock(child, self.alpha);
            if child_clock < key.0 {
                continue;
            }
            state.size += 1;
            if level + 1 == self.depth {
                state.touched_boundary = true;
                return false;
            }
            if state.size > self.max_size {
                state.truncated = true;
                return false;
            }
            path.push(PathNode {
                vertex_clock: child_clock,
                parent_edge: key,
            });
            let keep_going = self.explore(child, level + 1, path, clocks, state);
            path.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_pcf, ClockSet};
    use crate::graph::{Graph, PriorityOrder};

    #[test]
    fn matches_full_engine_clock_for_clock() {
        for (d, depth, alpha) in [(2u32, 8u32, 1.0), (2, 9, 0.5), (3, 5, 2.0), (2, 7, 3.0)] {
            let g = Graph::rooted_tree(d, depth).unwrap();
            let prio = PriorityOrder::for_graph(&g);
            let sampler = TreeRootSampler::new(d, depth, alpha, u64::MAX).unwrap();
            let (mut exact, mut touched) = (0, 0);
            for stream in 0..300u64 {
                let clocks = ClockSet::sample(&g, alpha, 99, stream).unwrap();
                let full = run_pcf(&g, &prio, &clocks, f64::INFINITY).unwrap();
                let lazy = sampler.sample(&ClockStream::new(99, stream));
                assert_eq!(lazy.touched_boundary, full.root_touched_boundary, "stream {stream}");
                if lazy.touched_boundary {
                    touched += 1;
                    assert!(lazy.size <= u64::from(full.root_cluster_size));
                } else {
                    exact += 1;
                    assert_eq!(lazy.size, u64::from(full.root_cluster_size), "stream {stream}");
                }
            }
            assert!(exact > 0);
            let _ = touched;
        }
    }

    #[test]
    fn size_cap_truncates() {
        let sampler = TreeRootSampler::new(2, 40, 0.2, 5).unwrap();
        let hits = (0..200)
            .map(|s| sampler.sample(&ClockStream::new(3, s)))
            .filter(|r| r.truncated)
            .count();
        assert!(hits > 0);
    }

    #[test]
    fn depth_zero_is_the_root_alone() {
        let sampler = TreeRootSampler::new(2, 0, 1.0, 10).unwrap();
        let r = sampler.sample(&ClockStream::new(1, 1));
        assert_eq!(r.size, 1);
        assert!(r.touched_boundary);
    }
}
