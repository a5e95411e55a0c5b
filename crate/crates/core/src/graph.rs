//! Properly edge-colored simple graphs with the degree and color-class
//! queries and the deletion operations the rest of the crate builds on.
//!
//! Vertices and colors keep their original 32-bit ids at the API surface;
//! internally both are compacted to dense indices (sorted by original id,
//! so dense order and id order agree). Edges live in fixed slots that are
//! tombstoned on deletion and can be revived, which is what lets the
//! reduction chain replay its removal logs instead of storing graph copies.

use std::collections::HashSet;
use std::fmt;

/// Original vertex id as supplied by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Original color id as supplied by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected colored edge. Endpoints are stored with `u <= v` so the
/// unordered pair has one canonical representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub color: ColorId,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, color: ColorId) -> Self {
        if u <= v {
            Edge { u, v, color }
        } else {
            Edge { u: v, v: u, color }
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.u, self.v, self.color)
    }
}

/// A set of edges claimed to be pairwise vertex-disjoint with pairwise
/// distinct colors. Claims are checked by [`ColoredGraph::verify_matching`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<Edge>,
}

impl Matching {
    pub fn new(edges: Vec<Edge>) -> Self {
        Matching { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Edge> {
        self.edges.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// An input edge had identical endpoints.
    SelfLoop {
        vertex: u32,
    },
    /// The same unordered endpoint pair appeared twice in the input.
    DuplicateEdge {
        u: u32,
        v: u32,
    },
    /// Two edges of one color meet at a vertex, violating proper coloring.
    ImproperColoring {
        vertex: u32,
        color: u32,
    },
    UnknownVertex {
        id: u32,
    },
    UnknownColor {
        id: u32,
    },
    UnknownEdge {
        u: u32,
        v: u32,
        color: u32,
    },
    /// The operation needs at least one edge.
    EmptyGraph,
    /// Internal structure check failed; indicates a bug in this crate.
    Inconsistent {
        detail: String,
    },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            GraphError::DuplicateEdge { u, v } => {
                write!(f, "duplicate edge between {u} and {v}")
            }
            GraphError::ImproperColoring { vertex, color } => {
                write!(f, "color {color} used twice at vertex {vertex}")
            }
            GraphError::UnknownVertex { id } => write!(f, "unknown vertex {id}"),
            GraphError::UnknownColor { id } => write!(f, "unknown color {id}"),
            GraphError::UnknownEdge { u, v, color } => {
                write!(f, "edge {u} {v} {color} is not in the graph")
            }
            GraphError::EmptyGraph => write!(f, "graph has no edges"),
            GraphError::Inconsistent { detail } => {
                write!(f, "graph structure inconsistent: {detail}")
            }
        }
    }
}

impl std::error::Error for GraphError {}

/// Why a claimed matching is not a rainbow matching of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingViolation {
    /// Edge absent from the graph (wrong endpoints or wrong color).
    NotInGraph { edge: Edge },
    /// Two matching edges share a vertex.
    SharedVertex {
        vertex: VertexId,
        first: Edge,
        second: Edge,
    },
    /// Two matching edges share a color.
    DuplicateColor {
        color: ColorId,
        first: Edge,
        second: Edge,
    },
}

impl fmt::Display for MatchingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingViolation::NotInGraph { edge } => {
                write!(f, "unknown edge: {edge} is not in the graph")
            }
            MatchingViolation::SharedVertex {
                vertex,
                first,
                second,
            } => {
                write!(f, "edges {first} and {second} share vertex {vertex}")
            }
            MatchingViolation::DuplicateColor {
                color,
                first,
                second,
            } => {
                write!(
                    f,
                    "edges {first} and {second} share duplicate color {color}"
                )
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Slot {
    pub(crate) u: usize,
    pub(crate) v: usize,
    pub(crate) color: usize,
}

/// Mutable properly edge-colored simple graph.
#[derive(Debug, Clone)]
pub struct ColoredGraph {
    /// Dense vertex index -> original id, ascending.
    pub(crate) vertex_ids: Vec<u32>,
    /// Dense color index -> original id, ascending.
    pub(crate) color_ids: Vec<u32>,
    /// Edge slots sorted by (u, v); slot indices are stable for the life
    /// of the graph, so ascending slot order is the canonical edge order.
    pub(crate) slots: Vec<Slot>,
    pub(crate) alive: Vec<bool>,
    /// Per-vertex incident slot indices (live and dead).
    pub(crate) adjacency: Vec<Vec<usize>>,
    /// Per-color slot indices (live and dead).
    pub(crate) classes: Vec<Vec<usize>>,
    pub(crate) vertex_alive: Vec<bool>,
    pub(crate) degree: Vec<usize>,
    pub(crate) class_size: Vec<usize>,
    pub(crate) live_edges: usize,
    pub(crate) live_vertices: usize,
}

impl ColoredGraph {
    /// Builds a graph from `(u, v, color)` triples, rejecting self-loops,
    /// repeated endpoint pairs, and improper colorings.
    pub fn build(edges: &[(u32, u32, u32)]) -> Result<ColoredGraph, GraphError> {
        let mut seen_pairs: HashSet<(u32, u32)> = HashSet::with_capacity(edges.len());
        let mut seen_vertex_color: HashSet<(u32, u32)> = HashSet::with_capacity(edges.len() * 2);
        for &(u, v, c) in edges {
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            let pair = (u.min(v), u.max(v));
            if !seen_pairs.insert(pair) {
                return Err(GraphError::DuplicateEdge {
                    u: pair.0,
                    v: pair.1,
                });
            }
            for vertex in [u, v] {
                if !seen_vertex_color.insert((vertex, c)) {
                    return Err(GraphError::ImproperColoring { vertex, color: c });
                }
            }
        }

        let mut vertex_ids: Vec<u32> = edges.iter().flat_map(|&(u, v, _)| [u, v]).collect();
        vertex_ids.sort_unstable();
        vertex_ids.dedup();
        let mut color_ids: Vec<u32> = edges.iter().map(|&(_, _, c)| c).collect();
        color_ids.sort_unstable();
        color_ids.dedup();

        let dense_vertex = |id: u32| vertex_ids.binary_search(&id).expect("id present");
        let dense_color = |id: u32| color_ids.binary_search(&id).expect("color present");

        let mut dense: Vec<Slot> = edges
            .iter()
            .map(|&(u, v, c)| {
                let (a, b) = (dense_vertex(u), dense_vertex(v));
                Slot {
                    u: a.min(b),
                    v: a.max(b),
                    color: dense_color(c),
                }
            })
            .collect();
        dense.sort_unstable_by_key(|s| (s.u, s.v));

        let n = vertex_ids.len();
        let k = color_ids.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut classes = vec![Vec::new(); k];
        let mut degree = vec![0usize; n];
        let mut class_size = vec![0usize; k];
        for (idx, slot) in dense.iter().enumerate() {
            adjacency[slot.u].push(idx);
            adjacency[slot.v].push(idx);
            classes[slot.color].push(idx);
            degree[slot.u] += 1;
            degree[slot.v] += 1;
            class_size[slot.color] += 1;
        }

        Ok(ColoredGraph {
            live_edges: dense.len(),
            live_vertices: n,
            alive: vec![true; dense.len()],
            vertex_alive: vec![true; n],
            vertex_ids,
            color_ids,
            slots: dense,
            adjacency,
            classes,
            degree,
            class_size,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.live_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.live_edges
    }

    /// Live vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertex_ids
            .iter()
            .enumerate()
            .filter(|&(idx, _)| self.vertex_alive[idx])
            .map(|(_, &id)| VertexId(id))
    }

    /// Live edges in canonical (min endpoint, max endpoint) order.
    pub fn edges(&self) -> Vec<Edge> {
        (0..self.slots.len())
            .filter(|&idx| self.alive[idx])
            .map(|idx| self.public_edge(idx))
            .collect()
    }

    /// Nonempty color classes as (color, live size), ascending by color.
    pub fn color_classes(&self) -> impl Iterator<Item = (ColorId, usize)> + '_ {
        self.color_ids
            .iter()
            .enumerate()
            .filter(|&(idx, _)| self.class_size[idx] > 0)
            .map(|(idx, &id)| (ColorId(id), self.class_size[idx]))
    }

    pub(crate) fn public_edge(&self, slot: usize) -> Edge {
        let s = self.slots[slot];
        Edge {
            u: VertexId(self.vertex_ids[s.u]),
            v: VertexId(self.vertex_ids[s.v]),
            color: ColorId(self.color_ids[s.color]),
        }
    }

    /// Dense index of a live vertex.
    fn dense_vertex(&self, v: VertexId) -> Result<usize, GraphError> {
        match self.vertex_ids.binary_search(&v.0) {
            Ok(idx) if self.vertex_alive[idx] => Ok(idx),
            _ => Err(GraphError::UnknownVertex { id: v.0 }),
        }
    }

    /// Dense index of a color with at least one live edge.
    fn dense_color(&self, c: ColorId) -> Result<usize, GraphError> {
        match self.color_ids.binary_search(&c.0) {
            Ok(idx) if self.class_size[idx] > 0 => Ok(idx),
            _ => Err(GraphError::UnknownColor { id: c.0 }),
        }
    }

    /// Slot holding the unordered pair, live or dead.
    pub(crate) fn pair_slot(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.slots.binary_search_by_key(&key, |s| (s.u, s.v)).ok()
    }

    fn live_slot_of_edge(&self, e: Edge) -> Result<usize, GraphError> {
        let unknown = || GraphError::UnknownEdge {
            u: e.u.0,
            v: e.v.0,
            color: e.color.0,
        };
        let u = self
            .vertex_ids
            .binary_search(&e.u.0)
            .map_err(|_| unknown())?;
        let v = self
            .vertex_ids
            .binary_search(&e.v.0)
            .map_err(|_| unknown())?;
        let slot = self.pair_slot(u, v).ok_or_else(unknown)?;
        if self.alive[slot] && self.color_ids[self.slots[slot].color] == e.color.0 {
            Ok(slot)
        } else {
            Err(unknown())
        }
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.live_slot_of_edge(e).is_ok()
    }

    /// Number of live edges at `v`.
    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        Ok(self.degree[self.dense_vertex(v)?])
    }

    /// Number of distinct colors on live edges at `v`. Counted directly,
    /// not read off the degree, so the proper-coloring invariant
    /// `color_degree == degree` stays an observable property.
    pub fn color_degree(&self, v: VertexId) -> Result<usize, GraphError> {
        let dv = self.dense_vertex(v)?;
        let mut colors: Vec<usize> = self.adjacency[dv]
            .iter()
            .filter(|&&slot| self.alive[slot])
            .map(|&slot| self.slots[slot].color)
            .collect();
        colors.sort_unstable();
        colors.dedup();
        Ok(colors.len())
    }

    /// Minimum degree over live vertices; 0 for the empty graph.
    pub fn min_degree(&self) -> usize {
        (0..self.vertex_ids.len())
            .filter(|&idx| self.vertex_alive[idx])
            .map(|idx| self.degree[idx])
            .min()
            .unwrap_or(0)
    }

    /// Maximum degree over live vertices; 0 for the empty graph.
    pub fn max_degree(&self) -> usize {
        (0..self.vertex_ids.len())
            .filter(|&idx| self.vertex_alive[idx])
            .map(|idx| self.degree[idx])
            .max()
            .unwrap_or(0)
    }

    /// A color whose class has minimum live size; ties to the smallest id.
    pub fn smallest_color_class(&self) -> Result<(ColorId, usize), GraphError> {
        let mut best: Option<(usize, usize)> = None;
        for (idx, &size) in self.class_size.iter().enumerate() {
            if size > 0 && best.is_none_or(|(_, s)| size < s) {
                best = Some((idx, size));
            }
        }
        best.map(|(idx, size)| (ColorId(self.color_ids[idx]), size))
            .ok_or(GraphError::EmptyGraph)
    }

    pub(crate) fn kill_slot(&mut self, slot: usize) {
        debug_assert!(self.alive[slot]);
        self.alive[slot] = false;
        let s = self.slots[slot];
        self.degree[s.u] -= 1;
        self.degree[s.v] -= 1;
        self.class_size[s.color] -= 1;
        self.live_edges -= 1;
    }

    fn revive_slot(&mut self, slot: usize) {
        debug_assert!(!self.alive[slot]);
        self.alive[slot] = true;
        let s = self.slots[slot];
        self.degree[s.u] += 1;
        self.degree[s.v] += 1;
        self.class_size[s.color] += 1;
        self.live_edges += 1;
        for endpoint in [s.u, s.v] {
            if !self.vertex_alive[endpoint] {
                self.vertex_alive[endpoint] = true;
                self.live_vertices += 1;
            }
        }
    }

    fn collect_sorted(&self, mut slots: Vec<usize>) -> Vec<Edge> {
        slots.sort_unstable();
        slots
            .into_iter()
            .map(|slot| self.public_edge(slot))
            .collect()
    }

    /// Removes `v` and its incident edges; returns the removed edges.
    pub fn delete_vertex(&mut self, v: VertexId) -> Result<Vec<Edge>, GraphError> {
        let dv = self.dense_vertex(v)?;
        let removed = self.delete_vertex_slots(dv);
        Ok(self.collect_sorted(removed))
    }

    pub(crate) fn delete_vertex_slots(&mut self, dv: usize) -> Vec<usize> {
        let incident: Vec<usize> = self.adjacency[dv]
            .iter()
            .copied()
            .filter(|&slot| self.alive[slot])
            .collect();
        for &slot in &incident {
            self.kill_slot(slot);
        }
        self.vertex_alive[dv] = false;
        self.live_vertices -= 1;
        incident
    }

    /// Removes every edge of color `c`; returns the removed edges.
    pub fn delete_color_class(&mut self, c: ColorId) -> Result<Vec<Edge>, GraphError> {
        let dc = self.dense_color(c)?;
        let removed = self.delete_class_slots(dc);
        Ok(self.collect_sorted(removed))
    }

    pub(crate) fn delete_class_slots(&mut self, dc: usize) -> Vec<usize> {
        let members: Vec<usize> = self.classes[dc]
            .iter()
            .copied()
            .filter(|&slot| self.alive[slot])
            .collect();
        for &slot in &members {
            self.kill_slot(slot);
        }
        members
    }

    /// Removes `e`, every edge sharing an endpoint with `e`, and every
    /// remaining edge of `e`'s color; returns exactly the removed edges.
    pub fn delete_step(&mut self, e: Edge) -> Result<Vec<Edge>, GraphError> {
        let slot = self.live_slot_of_edge(e)?;
        let removed = self.delete_step_slots(slot);
        Ok(self.collect_sorted(removed))
    }

    pub(crate) fn delete_step_slots(&mut self, slot: usize) -> Vec<usize> {
        let s = self.slots[slot];
        let mut removed = Vec::new();
        for endpoint in [s.u, s.v] {
            let incident: Vec<usize> = self.adjacency[endpoint]
                .iter()
                .copied()
                .filter(|&i| self.alive[i])
                .collect();
            for i in incident {
                self.kill_slot(i);
                removed.push(i);
            }
        }
        let class_rest: Vec<usize> = self.classes[s.color]
            .iter()
            .copied()
            .filter(|&i| self.alive[i])
            .collect();
        for i in class_rest {
            self.kill_slot(i);
            removed.push(i);
        }
        removed
    }

    /// Re-inserts previously removed edges, reviving dead endpoints.
    /// Used to replay reduction logs backwards.
    pub(crate) fn restore_edges(&mut self, edges: &[Edge]) {
        for e in edges {
            let u = self
                .vertex_ids
                .binary_search(&e.u.0)
                .expect("restored edge endpoint was never in this graph");
            let v = self
                .vertex_ids
                .binary_search(&e.v.0)
                .expect("restored edge endpoint was never in this graph");
            let slot = self
                .pair_slot(u, v)
                .expect("restored edge pair was never in this graph");
            self.revive_slot(slot);
        }
    }

    pub(crate) fn restore_vertex(&mut self, v: VertexId) {
        if let Ok(idx) = self.vertex_ids.binary_search(&v.0) {
            if !self.vertex_alive[idx] {
                self.vertex_alive[idx] = true;
                self.live_vertices += 1;
            }
        }
    }

    /// True iff no three live vertices are pairwise adjacent.
    pub fn is_triangle_free(&self) -> bool {
        let n = self.vertex_ids.len();
        let mut marked = vec![false; n];
        for idx in 0..self.slots.len() {
            if !self.alive[idx] {
                continue;
            }
            let Slot { u, v, .. } = self.slots[idx];
            for &slot in &self.adjacency[u] {
                if self.alive[slot] {
                    let s = self.slots[slot];
                    marked[if s.u == u { s.v } else { s.u }] = true;
                }
            }
            let found = self.adjacency[v].iter().any(|&slot| {
                if !self.alive[slot] {
                    return false;
                }
                let s = self.slots[slot];
                marked[if s.u == v { s.v } else { s.u }]
            });
            for &slot in &self.adjacency[u] {
                if self.alive[slot] {
                    let s = self.slots[slot];
                    marked[if s.u == u { s.v } else { s.u }] = false;
                }
            }
            if found {
                return false;
            }
        }
        true
    }

    /// All the ways `m` fails to be a rainbow matching of this graph.
    pub fn matching_violations(&self, m: &Matching) -> Vec<MatchingViolation> {
        let mut violations = Vec::new();
        for &e in &m.edges {
            if !self.contains_edge(e) {
                violations.push(MatchingViolation::NotInGraph { edge: e });
            }
        }
        for (i, &a) in m.edges.iter().enumerate() {
            for &b in &m.edges[i + 1..] {
                for vertex in [a.u, a.v] {
                    if vertex == b.u || vertex == b.v {
                        violations.push(MatchingViolation::SharedVertex {
                            vertex,
                            first: a,
                            second: b,
                        });
                    }
                }
                if a.color == b.color {
                    violations.push(MatchingViolation::DuplicateColor {
                        color: a.color,
                        first: a,
                        second: b,
                    });
                }
            }
        }
        violations
    }

    /// True iff every edge of `m` is in the graph and the edges are
    /// pairwise vertex-disjoint with pairwise distinct colors.
    pub fn verify_matching(&self, m: &Matching) -> bool {
        self.matching_violations(m).is_empty()
    }

    /// Full structural recheck of every graph invariant. Intended for
    /// generators and tests; mutation paths maintain these incrementally.
    pub fn validate(&self) -> Result<(), GraphError> {
        let inconsistent = |detail: &str| GraphError::Inconsistent {
            detail: detail.into(),
        };
        for window in self.slots.windows(2) {
            if (window[0].u, window[0].v) >= (window[1].u, window[1].v) {
                return Err(inconsistent("slots out of order or duplicate pair"));
            }
        }
        for (idx, slot) in self.slots.iter().enumerate() {
            if slot.u >= slot.v {
                return Err(inconsistent("slot endpoints not strictly ordered"));
            }
            if self.alive[idx] && !(self.vertex_alive[slot.u] && self.vertex_alive[slot.v]) {
                return Err(inconsistent("live edge with dead endpoint"));
            }
        }
        let mut degree = vec![0usize; self.vertex_ids.len()];
        let mut class_size = vec![0usize; self.color_ids.len()];
        let mut live = 0usize;
        for (idx, slot) in self.slots.iter().enumerate() {
            if self.alive[idx] {
                degree[slot.u] += 1;
                degree[slot.v] += 1;
                class_size[slot.color] += 1;
                live += 1;
            }
        }
        if degree != self.degree || class_size != self.class_size || live != self.live_edges {
            return Err(inconsistent("cached counts disagree with slots"));
        }
        if self.vertex_alive.iter().filter(|&&a| a).count() != self.live_vertices {
            return Err(inconsistent("cached vertex count disagrees"));
        }
        for (dv, incident) in self.adjacency.iter().enumerate() {
            let mut colors: Vec<usize> = incident
                .iter()
                .filter(|&&slot| self.alive[slot])
                .map(|&slot| self.slots[slot].color)
                .collect();
            colors.sort_unstable();
            for pair in colors.windows(2) {
                if pair[0] == pair[1] {
                    return Err(GraphError::ImproperColoring {
                        vertex: self.vertex_ids[dv],
                        color: self.color_ids[pair[0]],
                    });
                }
            }
        }
        Ok(())
    }
}
