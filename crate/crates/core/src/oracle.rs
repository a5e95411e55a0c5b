//! Exact maximum rainbow matching by branch and bound, used as ground
//! truth on small instances, plus the Latin-square transversal decider
//! built on top of it.
//!
//! Edges are branched include/exclude in canonical order. A node is cut
//! when the incumbent already matches its upper bound: current size plus
//! the number of distinct unused colors on remaining edges that are still
//! compatible with the current partial matching. The maximum is exact and
//! independent of the branching order; the witness and the node count are
//! pinned down by the canonical order.

use crate::generators::{latin_to_bipartite, LatinSquare};
use crate::graph::{ColoredGraph, Matching};
use std::fmt;

/// Default edge cap: keeps worst-case searches comfortably under seconds.
pub const DEFAULT_EDGE_CAP: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The instance has more edges than the caller-supplied cap.
    CapExceeded { edges: usize, cap: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::CapExceeded { edges, cap } => {
                write!(
                    f,
                    "instance has {edges} edges, above the oracle cap of {cap}"
                )
            }
        }
    }
}

impl std::error::Error for OracleError {}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub max_size: usize,
    pub witness: Matching,
    pub nodes_explored: u64,
}

struct Search {
    /// (u, v, color) in dense indices, canonical order.
    edges: Vec<(usize, usize, usize)>,
    vertex_used: Vec<bool>,
    color_used: Vec<bool>,
    /// Epoch-stamped scratch pad for counting distinct colors per node.
    color_seen: Vec<u64>,
    epoch: u64,
    current: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    /// When set, the search stops as soon as `best` reaches this size.
    goal: Option<usize>,
}

impl Search {
    fn new(graph: &ColoredGraph, goal: Option<usize>) -> Self {
        let edges = (0..graph.slots.len())
            .filter(|&slot| graph.alive[slot])
            .map(|slot| {
                let s = graph.slots[slot];
                (s.u, s.v, s.color)
            })
            .collect();
        Search {
            edges,
            vertex_used: vec![false; graph.vertex_ids.len()],
            color_used: vec![false; graph.color_ids.len()],
            color_seen: vec![0; graph.color_ids.len()],
            epoch: 0,
            current: Vec::new(),
            best: Vec::new(),
            nodes: 0,
            goal,
        }
    }

    fn goal_reached(&self) -> bool {
        self.goal.is_some_and(|k| self.best.len() >= k)
    }

    /// Distinct unused colors among remaining compatible edges.
    fn remaining_color_bound(&mut self, from: usize) -> usize {
        self.epoch += 1;
        let mut count = 0;
        for &(u, v, color) in &self.edges[from..] {
            if self.vertex_used[u]
                || self.vertex_used[v]
                || self.color_used[color]
                || self.color_seen[color] == self.epoch
            {
                continue;
            }
            self.color_seen[color] = self.epoch;
            count += 1;
        }
        count
    }

    fn dfs(&mut self, idx: usize) {
        self.nodes += 1;
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if self.goal_reached() || idx == self.edges.len() {
            return;
        }
        let bound = self.current.len() + self.remaining_color_bound(idx);
        if bound <= self.best.len() {
            return;
        }
        if let Some(k) = self.goal {
            if bound < k {
                return;
            }
        }

        let (u, v, color) = self.edges[idx];
        if !self.vertex_used[u] && !self.vertex_used[v] && !self.color_used[color] {
            self.vertex_used[u] = true;
            self.vertex_used[v] = true;
            self.color_used[color] = true;
            self.current.push(idx);
            self.dfs(idx + 1);
            self.current.pop();
            self.vertex_used[u] = false;
            self.vertex_used[v] = false;
            self.color_used[color] = false;
            if self.goal_reached() {
                return;
            }
        }
        self.dfs(idx + 1);
    }
}

fn run_search(
    graph: &ColoredGraph,
    edge_cap: usize,
    goal: Option<usize>,
) -> Result<(Search, Vec<usize>), OracleError> {
    let edges = graph.edge_count();
    if edges > edge_cap {
        return Err(OracleError::CapExceeded {
            edges,
            cap: edge_cap,
        });
    }
    let mut search = Search::new(graph, goal);
    search.dfs(0);
    let best = search.best.clone();
    Ok((search, best))
}

/// Exact maximum rainbow matching size with a witness.
pub fn max_rainbow_matching(
    graph: &ColoredGraph,
    edge_cap: usize,
) -> Result<OracleResult, OracleError> {
    let (search, best_local) = run_search(graph, edge_cap, None)?;
    // Map local edge positions back through the live-slot enumeration.
    let live_slots: Vec<usize> = (0..graph.slots.len()).filter(|&s| graph.alive[s]).collect();
    let witness = Matching::new(
        best_local
            .iter()
            .map(|&pos| graph.public_edge(live_slots[pos]))
            .collect(),
    );
    Ok(OracleResult {
        max_size: witness.len(),
        witness,
        nodes_explored: search.nodes,
    })
}

/// True iff a rainbow matching of size at least `k` exists; stops at the
/// first witness instead of searching for the maximum.
pub fn has_rainbow_matching_of_size(
    graph: &ColoredGraph,
    k: usize,
    edge_cap: usize,
) -> Result<bool, OracleError> {
    if k == 0 {
        // Cap still applies; an oversized instance is refused outright.
        let edges = graph.edge_count();
        if edges > edge_cap {
            return Err(OracleError::CapExceeded {
                edges,
                cap: edge_cap,
            });
        }
        return Ok(true);
    }
    let (_, best) = run_search(graph, edge_cap, Some(k))?;
    Ok(best.len() >= k)
}

/// True iff the square has a transversal: a perfect rainbow matching of
/// its bipartite encoding.
pub fn has_transversal(square: &LatinSquare, edge_cap: usize) -> Result<bool, OracleError> {
    let n = square.order();
    if n * n > edge_cap {
        return Err(OracleError::CapExceeded {
            edges: n * n,
            cap: edge_cap,
        });
    }
    has_rainbow_matching_of_size(&latin_to_bipartite(square), n, edge_cap)
}
