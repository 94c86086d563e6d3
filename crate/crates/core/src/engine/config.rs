use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// State of every edge (open/closed) and vertex (warm/frozen) at one time point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    edge_open: Vec<bool>,
    vertex_frozen: Vec<bool>,
    /// `f64::INFINITY` for the final configuration of a run to absorption.
    pub time: f64,
}

impl Configuration {
    /// All edges closed, all vertices warm.
    pub fn initial(vertex_count: usize, edge_count: usize) -> Configuration {
        Configuration {
            edge_open: vec![false; edge_count],
            vertex_frozen: vec![false; vertex_count],
            time: 0.0,
        }
    }

    pub fn from_parts(edge_open: Vec<bool>, vertex_frozen: Vec<bool>, time: f64) -> Configuration {
        Configuration {
            edge_open,
            vertex_frozen,
            time,
        }
    }

    pub fn is_open(&self, e: usize) -> bool {
        self.edge_open[e]
    }

    pub fn is_frozen(&self, v: usize) -> bool {
        self.vertex_frozen[v]
    }

    pub fn is_warm(&self, v: usize) -> bool {
        !self.vertex_frozen[v]
    }

    pub fn edge_states(&self) -> &[bool] {
        &self.edge_open
    }

    pub fn vertex_states(&self) -> &[bool] {
        &self.vertex_frozen
    }

    pub fn open_count(&self) -> usize {
        self.edge_open.iter().filter(|&&b| b).count()
    }

    pub fn frozen_count(&self) -> usize {
        self.vertex_frozen.iter().filter(|&&b| b).count()
    }

    /// Partial order: `self >= other` iff every edge open in `other` is open in
    /// `self` and every vertex warm in `other` is warm in `self`.
    pub fn dominates(&self, other: &Configuration) -> bool {
        self.edge_open.len() == other.edge_open.len()
            && self.vertex_frozen.len() == other.vertex_frozen.len()
            && self
                .edge_open
                .iter()
                .zip(&other.edge_open)
                .all(|(&mine, &theirs)| mine || !theirs)
            && self
                .vertex_frozen
                .iter()
                .zip(&other.vertex_frozen)
                .all(|(&mine, &theirs)| !mine || theirs)
    }

    /// Connected components of the open-edge graph, as a component id per vertex.
    pub fn components(&self, graph: &Graph) -> Vec<u32> {
        let n = graph.vertex_count();
        let mut comp = vec![u32::MAX; n];
        let mut stack = Vec::new();
        let mut next = 0;
        for start in 0..n {
            if comp[start] != u32::MAX {
                continue;
            }
            comp[start] = next;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &e in graph.incident_edges(v) {
                    if !self.edge_open[e as usize] {
                        continue;
                    }
                    let (a, b) = graph.edge(e as usize);
                    let w = if a as usize == v { b } else { a } as usize;
                    if comp[w] == u32::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domination_order() {
        let low = Configuration::from_parts(vec![true, false], vec![true, false], 1.0);
        let high = Configuration::from_parts(vec![true, true], vec![false, false], 1.0);
        assert!(high.dominates(&low));
        assert!(!low.dominates(&high));
        assert!(low.dominates(&low));
        let other = Configuration::from_parts(vec![false, true], vec![false, false], 1.0);
        assert!(!other.dominates(&low));
    }

    #[test]
    fn components_follow_open_edges() {
        let g = Graph::generic(4, &[(0, 1), (1, 2), (2, 3)], &[]).unwrap();
        let c = Configuration::from_parts(vec![true, false, true], vec![false; 4], 0.0);
        let comp = c.components(&g);
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[2], comp[3]);
        assert_ne!(comp[1], comp[2]);
    }
}
