//! Finite graphs the engine runs on.
//!
//! Vertex indexing is deterministic: row-major for grids (`y * width + x`) and
//! breadth-first for rooted trees (root `0`, children of `v` are
//! `d*v + 1 ..= d*v + d`). Seeded runs are bit-reproducible because of it.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PcfError, Result};

/// Upper bound on `vertex_count + edge_count` for materialized graphs.
pub const MAX_ELEMENTS: u64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    Grid { width: u32, height: u32 },
    RootedTree { d: u32, depth: u32 },
    Generic,
}

/// Immutable finite graph with a designated boundary vertex set.
#[derive(Debug, Clone)]
pub struct Graph {
    vertex_count: u32,
    edges: Vec<(u32, u32)>,
    // CSR adjacency: incident edge indices of v are incident[offsets[v]..offsets[v+1]]
    offsets: Vec<u32>,
    incident: Vec<u32>,
    boundary: Vec<bool>,
    kind: GraphKind,
}

/// Number of edges of a `width x height` grid.
pub fn grid_edge_count(width: u64, height: u64) -> u64 {
    width * height.saturating_sub(1) + height * width.saturating_sub(1)
}

/// Number of vertices of a rooted d-ary tree truncated at `depth`.
pub fn tree_vertex_count(d: u64, depth: u32) -> Option<u64> {
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for i in 0..=depth {
        total = total.checked_add(level)?;
        if i < depth {
            level = level.checked_mul(d)?;
        }
    }
    Some(total)
}

fn check_budget(vertices: u64, edges: u64) -> Result<()> {
    match vertices.checked_add(edges) {
        Some(n) if n <= MAX_ELEMENTS => Ok(()),
        _ => Err(PcfError::Size(format!(
            "{vertices} vertices and {edges} edges exceed the budget of {MAX_ELEMENTS} elements"
        ))),
    }
}

impl Graph {
    /// Rectangular grid with row-major indexing and the perimeter as boundary.
    ///
    /// Horizontal edges come first (row by row), then vertical edges.
    pub fn grid(width: u32, height: u32) -> Result<Graph> {
        if width == 0 || height == 0 {
            return Err(PcfError::Parameter(format!(
                "grid dimensions must be positive, got {width}x{height}"
            )));
        }
        let (w, h) = (u64::from(width), u64::from(height));
        let n = w
            .checked_mul(h)
            .ok_or_else(|| PcfError::Size(format!("{width}x{height} grid overflows")))?;
        check_budget(n, grid_edge_count(w, h))?;

        let mut edges = Vec::with_capacity(grid_edge_count(w, h) as usize);
        for y in 0..height {
            for x in 0..width - 1 {
                let v = y * width + x;
                edges.push((v, v + 1));
            }
        }
        for y in 0..height - 1 {
            for x in 0..width {
                let v = y * width + x;
                edges.push((v, v + width));
            }
        }
        let boundary = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| x == 0 || y == 0 || x == width - 1 || y == height - 1)
            .collect();
        Ok(Self::assemble(
            n as u32,
            edges,
            boundary,
            GraphKind::Grid { width, height },
        ))
    }

    /// Rooted d-ary tree truncated at `depth`; the leaves at level `depth` form the boundary.
    pub fn rooted_tree(d: u32, depth: u32) -> Result<Graph> {
        if d < 2 {
            return Err(PcfError::Parameter(format!("branching factor must be >= 2, got {d}")));
        }
        let n = tree_vertex_count(u64::from(d), depth)
            .ok_or_else(|| PcfError::Size(format!("d={d}, depth={depth} overflows")))?;
        check_budget(n, n - 1)?;
        let n = n as u32;
        let edges = (1..n).map(|c| ((c - 1) / d, c)).collect();
        let first_leaf = if depth == 0 {
            0
        } else {
            tree_vertex_count(u64::from(d), depth - 1).unwrap() as u32
        };
        let boundary = (0..n).map(|v| v >= first_leaf).collect();
        Ok(Self::assemble(n, edges, boundary, GraphKind::RootedTree { d, depth }))
    }

    /// Validated graph from an explicit edge list and boundary set.
    pub fn generic(vertex_count: u32, edges: &[(u32, u32)], boundary: &[u32]) -> Result<Graph> {
        if vertex_count == 0 {
            return Err(PcfError::Validation("graph must have at least one vertex".into()));
        }
        check_budget(u64::from(vertex_count), edges.len() as u64)?;
        let mut seen = HashSet::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(PcfError::Validation(format!(
                    "edge {i} = ({u}, {v}) has an endpoint >= vertex count {vertex_count}"
                )));
            }
            if u == v {
                return Err(PcfError::Validation(format!("edge {i} is a self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(PcfError::Validation(format!("edge {i} = ({u}, {v}) is a duplicate")));
            }
        }
        let mut mask = vec![false; vertex_count as usize];
        for &b in boundary {
            if b >= vertex_count {
                return Err(PcfError::Validation(format!(
                    "boundary vertex {b} >= vertex count {vertex_count}"
                )));
            }
            mask[b as usize] = true;
        }
        Ok(Self::assemble(vertex_count, edges.to_vec(), mask, GraphKind::Generic))
    }

    fn assemble(
        vertex_count: u32,
        edges: Vec<(u32, u32)>,
        boundary: Vec<bool>,
        kind: GraphKind,
    ) -> Graph {
        let n = vertex_count as usize;
        let mut degree = vec![0u32; n + 1];
        for &(u, v) in &edges {
            degree[u as usize + 1] += 1;
            degree[v as usize + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut cursor = offsets.clone();
        let mut incident = vec![0u32; 2 * edges.len()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                incident[cursor[w as usize] as usize] = e as u32;
                cursor[w as usize] += 1;
            }
        }
        Graph {
            vertex_count,
            edges,
            offsets,
            incident,
            boundary,
            kind,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count as usize
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (u32, u32) {
        self.edges[e]
    }

    /// Indices of the edges incident to `v`.
    pub fn incident_edges(&self, v: usize) -> &[u32] {
        &self.incident[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn degree(&self, v: usize) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    pub fn boundary(&self) -> impl Iterator<Item = u32> + '_ {
        self.boundary
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(v, _)| v as u32)
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Copy of this graph with a different boundary set; the kind is kept.
    pub fn with_boundary(&self, boundary: &[u32]) -> Result<Graph> {
        let mut mask = vec![false; self.vertex_count()];
        for &b in boundary {
            let slot = mask.get_mut(b as usize).ok_or_else(|| {
                PcfError::Validation(format!("boundary vertex {b} out of range"))
            })?;
            *slot = true;
        }
        Ok(Graph {
            boundary: mask,
            ..self.clone()
        })
    }

    /// Parse the plain-text edge-list format: a header `V E B`, then `E` lines
    /// `u v`, then `B` boundary indices (whitespace separated).
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let parse_err = |line: usize, message: String| PcfError::Parse {
            path: None,
            line,
            message,
        };
        let mut tokens = text.lines().enumerate().flat_map(|(i, line)| {
            line.split_whitespace().map(move |tok| (i + 1, tok))
        });
        let mut next_number = |what: &str| -> Result<u32> {
            let (line, tok) = tokens
                .next()
                .ok_or_else(|| parse_err(0, format!("unexpected end of input, expected {what}")))?;
            tok.parse::<u32>()
                .map_err(|_| parse_err(line, format!("expected {what}, found {tok:?}")))
        };
        let v = next_number("vertex count")?;
        let e = next_number("edge count")?;
        let b = next_number("boundary count")?;
        let mut edges = Vec::with_capacity(e as usize);
        for _ in 0..e {
            let u = next_number("edge endpoint")?;
            let w = next_number("edge endpoint")?;
            edges.push((u, w));
        }
        let boundary = (0..b)
            .map(|_| next_number("boundary vertex"))
            .collect::<Result<Vec<_>>>()?;
        if let Some((line, tok)) = tokens.next() {
            return Err(parse_err(line, format!("trailing token {tok:?}")));
        }
        Graph::generic(v, &edges, &boundary)
    }

    pub fn read_edge_list(path: &Path) -> Result<Graph> {
        let text = std::fs::read_to_string(path)?;
        Graph::from_edge_list(&text).map_err(|err| match err {
            PcfError::Parse { line, message, .. } => PcfError::Parse {
                path: Some(path.to_path_buf()),
                line,
                message,
            },
            other => other,
        })
    }

    pub fn to_edge_list(&self) -> String {
        let boundary: Vec<u32> = self.boundary().collect();
        let mut out = format!("{} {} {}\n", self.vertex_count, self.edges.len(), boundary.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        let line: Vec<String> = boundary.iter().map(u32::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
        out
    }
}

/// Vertex priorities: `rank[v]` is the position of `v` in the enumeration,
/// lower rank meaning higher priority. The lowest-ranked vertex of a cluster
/// is its label and its clock governs the cluster's freezing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityOrder {
    rank: Vec<u32>,
}

impl PriorityOrder {
    /// Index order; this is BFS order for trees and row-major order for grids.
    pub fn identity(n: usize) -> PriorityOrder {
        PriorityOrder {
            rank: (0..n as u32).collect(),
        }
    }

    pub fn from_ranks(rank: Vec<u32>) -> Result<PriorityOrder> {
        let mut seen = vec![false; rank.len()];
        for &r in &rank {
            match seen.get_mut(r as usize) {
                Some(slot) if !*slot => *slot = true,
                _ => {
                    return Err(PcfError::Validation(format!(
                        "rank {r} repeated or out of range for {} vertices",
                        rank.len()
                    )))
                }
            }
        }
        Ok(PriorityOrder { rank })
    }

    pub fn shuffled<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PriorityOrder {
        let mut rank: Vec<u32> = (0..n as u32).collect();
        rank.shuffle(rng);
        PriorityOrder { rank }
    }

    /// Priorities to use by default for `graph`.
    pub fn for_graph(graph: &Graph) -> PriorityOrder {
        PriorityOrder::identity(graph.vertex_count())
    }

    pub fn rank(&self, v: usize) -> u32 {
        self.rank[v]
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    /// For rooted trees: every parent must outrank its children.
    pub fn validate_for_tree(&self, graph: &Graph) -> Result<()> {
        let GraphKind::RootedTree { .. } = graph.kind() else {
            return Ok(());
        };
        if self.len() != graph.vertex_count() {
            return Err(PcfError::Contract("priority order sized for another graph".into()));
        }
        for &(parent, child) in graph.edges() {
            if self.rank[parent as usize] >= self.rank[child as usize] {
                return Err(PcfError::Validation(format!(
                    "rank of parent {parent} is not below rank of child {child}"
                )));
            }
        }
        Ok(())
    }
}

/// A subgraph `H` of an ambient graph, stored as index subsets of the ambient graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    vertex_mask: Vec<bool>,
    edges: Vec<u32>,
}

impl Subgraph {
    pub fn full(graph: &Graph) -> Subgraph {
        Subgraph {
            vertex_mask: vec![true; graph.vertex_count()],
            edges: (0..graph.edge_count() as u32).collect(),
        }
    }

    /// Subgraph induced by `vertices`: keeps every ambient edge with both ends inside.
    pub fn induced(graph: &Graph, vertices: &[u32]) -> Result<Subgraph> {
        let mut vertex_mask = vec![false; graph.vertex_count()];
        for &v in vertices {
            *vertex_mask.get_mut(v as usize).ok_or_else(|| {
                PcfError::Contract(format!("subgraph vertex {v} out of range"))
            })? = true;
        }
        let edges = graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| vertex_mask[u as usize] && vertex_mask[v as usize])
            .map(|(e, _)| e as u32)
            .collect();
        Ok(Subgraph { vertex_mask, edges })
    }

    /// Arbitrary subgraph; every edge must have both endpoints among `vertices`.
    pub fn new(graph: &Graph, vertices: &[u32], edges: &[u32]) -> Result<Subgraph> {
        let mut sub = Subgraph::induced(graph, vertices)?;
        let mut seen = vec![false; graph.edge_count()];
        for &e in edges {
            let Some(&(u, v)) = graph.edges().get(e as usize) else {
                return Err(PcfError::Contract(format!("subgraph edge {e} out of range")));
            };
            if !sub.vertex_mask[u as usize] || !sub.vertex_mask[v as usize] {
                return Err(PcfError::Contract(format!(
                    "subgraph edge {e} = ({u}, {v}) leaves the vertex set"
                )));
            }
            seen[e as usize] = true;
        }
        sub.edges = (0..graph.edge_count() as u32)
            .filter(|&e| seen[e as usize])
            .collect();
        Ok(sub)
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertex_mask[v]
    }

    pub fn vertex_mask(&self) -> &[bool] {
        &self.vertex_mask
    }

    pub fn edges(&self) -> &[u32] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_mask.iter().filter(|&&b| b).count()
    }

    /// Boundary of the subgraph inside `graph`: vertices incident to an ambient
    /// edge missing from the subgraph, together with the ambient boundary.
    pub fn boundary_in(&self, graph: &Graph) -> Vec<bool> {
        let mut has_edge = vec![false; graph.edge_count()];
        for &e in &self.edges {
            has_edge[e as usize] = true;
        }
        (0..graph.vertex_count())
            .map(|v| {
                self.vertex_mask[v]
                    && (graph.is_boundary(v)
                        || graph
                            .incident_edges(v)
                            .iter()
                            .any(|&e| !has_edge[e as usize]))
            })
            .collect()
    }

    pub fn is_subgraph_of(&self, other: &Subgraph) -> bool {
        let edge_set: HashSet<u32> = other.edges.iter().copied().collect();
        self.vertex_mask
            .iter()
            .zip(&other.vertex_mask)
            .all(|(&a, &b)| !a || b)
            && self.edges.iter().all(|e| edge_set.contains(e))
    }
}
