//! The preprocessing pipeline: iterated removals of a maximum-degree
//! vertex or a largest color class, each followed by an edge-trim pass,
//! driving the graph down to a core on which the greedy matcher runs.
//! Every removal is logged so a matching of the core can be extended back
//! up the chain one edge per step, and so the chain can be replayed.
//!
//! The running `target` starts at the input's minimum degree and drops by
//! one per step. Removing a vertex or a color class lowers each remaining
//! degree by at most one, and a trim at the new target only deletes edges
//! whose endpoints both still exceed it, so `min_degree >= target` holds
//! at every level. The recorded `min_degree_after` makes the occasional
//! strict surplus observable without treating it as an error.

use crate::graph::{ColorId, ColoredGraph, Edge, GraphError, Matching, VertexId};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    VertexRemoval(VertexId),
    ColorClassRemoval(ColorId),
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionKind::VertexRemoval(v) => write!(f, "vertex_removal({v})"),
            ReductionKind::ColorClassRemoval(c) => write!(f, "color_class_removal({c})"),
        }
    }
}

/// One removal plus the trim pass that followed it.
#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub kind: ReductionKind,
    /// Edges deleted by the vertex/class removal itself.
    pub primary_removed: Vec<Edge>,
    /// Edges deleted by the subsequent trim pass, in deletion order.
    pub trimmed: Vec<Edge>,
    /// The target at the level this step left; the step's trim ran at
    /// `target_before - 1`.
    pub target_before: usize,
    /// Minimum degree observed after the step and its trim.
    pub min_degree_after: usize,
}

/// The whole reduction: initial trim, removal steps, and the core graph.
#[derive(Debug, Clone)]
pub struct ReductionChain {
    /// Edges deleted by the trim of the input graph at its own target.
    pub initial_trimmed: Vec<Edge>,
    pub steps: Vec<ReductionStep>,
    pub core: ColoredGraph,
    pub core_target: usize,
    /// Whether the tighter triangle-free degree rule drove the removals.
    pub triangle_free_active: bool,
}

impl ReductionChain {
    pub fn vertex_removal_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.kind, ReductionKind::VertexRemoval(_)))
            .count()
    }

    pub fn color_class_removal_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.kind, ReductionKind::ColorClassRemoval(_)))
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceError {
    /// `trim` was asked to preserve a floor above the current minimum degree.
    TargetExceedsMinDegree { target: usize, min_degree: usize },
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::TargetExceedsMinDegree { target, min_degree } => {
                write!(
                    f,
                    "trim target {target} exceeds the minimum degree {min_degree}"
                )
            }
        }
    }
}

impl std::error::Error for ReduceError {}

/// Extension is guaranteed by counting whenever the preconditions hold,
/// so this error always signals a bug or a violated precondition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendError {
    /// The matching must have exactly `target_before - 1` edges.
    WrongMatchingSize { expected: usize, actual: usize },
    /// No edge at the removed vertex / in the removed class avoids the
    /// matching; impossible when the step's removal rule really fired.
    NoExtensionEdge { step: String },
}

impl fmt::Display for ExtendError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendError::WrongMatchingSize { expected, actual } => {
                write!(
                    f,
                    "extension failed: matching has {actual} edges, step needs {expected}"
                )
            }
            ExtendError::NoExtensionEdge { step } => {
                write!(f, "extension failed: no compatible edge for {step}")
            }
        }
    }
}

impl std::error::Error for ExtendError {}

fn trim_in_place(graph: &mut ColoredGraph, target: usize) -> Vec<Edge> {
    let mut removed = Vec::new();
    loop {
        let mut deleted_this_pass = false;
        // One fixed-order pass; deletions only lower degrees, so an edge
        // skipped once can never become deletable, but the repeat pass
        // makes the fixpoint explicit.
        for slot in 0..graph.slots.len() {
            if !graph.alive[slot] {
                continue;
            }
            let s = graph.slots[slot];
            if graph.degree[s.u] > target && graph.degree[s.v] > target {
                graph.kill_slot(slot);
                removed.push(graph.public_edge(slot));
                deleted_this_pass = true;
            }
        }
        if !deleted_this_pass {
            break;
        }
    }
    removed
}

/// Repeatedly deletes, in canonical edge order, any edge whose endpoints
/// both have degree strictly greater than `target`. Afterwards every
/// remaining edge touches a vertex of degree exactly `target`, and the
/// minimum degree still is at least `target`.
pub fn trim(graph: &mut ColoredGraph, target: usize) -> Result<Vec<Edge>, ReduceError> {
    let min_degree = graph.min_degree();
    if min_degree < target {
        return Err(ReduceError::TargetExceedsMinDegree { target, min_degree });
    }
    Ok(trim_in_place(graph, target))
}

/// Degree threshold above which a maximum-degree vertex is removed.
fn degree_bound(target: usize, triangle_free: bool) -> usize {
    if triangle_free {
        2 * target - 2
    } else {
        3 * target - 3
    }
}

/// Runs the reduction to completion, consuming the graph into the core.
///
/// Starting from `target = min_degree` and an initial trim, each round
/// removes a maximum-degree vertex when the degree bound is exceeded
/// (`3*target - 3`, or `2*target - 2` under the confirmed triangle-free
/// rule), otherwise a largest color class when one has at least
/// `2*target - 1` edges, then decrements the target and trims. It stops
/// when neither rule fires or the target reaches zero. Ties go to the
/// smallest vertex id / color id.
pub fn reduce(mut graph: ColoredGraph, triangle_free_rule: bool) -> ReductionChain {
    let triangle_free_active = triangle_free_rule && graph.is_triangle_free();
    let mut target = graph.min_degree();
    let initial_trimmed = trim_in_place(&mut graph, target);
    let mut steps = Vec::new();

    while target > 0 {
        let kind;
        let primary_removed;
        if graph.max_degree() > degree_bound(target, triangle_free_active) {
            let dv = (0..graph.vertex_ids.len())
                .filter(|&idx| graph.vertex_alive[idx])
                .max_by_key(|&idx| (graph.degree[idx], std::cmp::Reverse(idx)))
                .expect("positive max degree implies a live vertex");
            kind = ReductionKind::VertexRemoval(VertexId(graph.vertex_ids[dv]));
            let slots = graph.delete_vertex_slots(dv);
            primary_removed = sorted_edges(&graph, slots);
        } else {
            let largest = (0..graph.color_ids.len())
                .filter(|&idx| graph.class_size[idx] >= 2 * target - 1)
                .max_by_key(|&idx| (graph.class_size[idx], std::cmp::Reverse(idx)));
            let Some(dc) = largest else {
                break;
            };
            kind = ReductionKind::ColorClassRemoval(ColorId(graph.color_ids[dc]));
            let slots = graph.delete_class_slots(dc);
            primary_removed = sorted_edges(&graph, slots);
        }
        let target_before = target;
        target -= 1;
        let trimmed = trim_in_place(&mut graph, target);
        steps.push(ReductionStep {
            kind,
            primary_removed,
            trimmed,
            target_before,
            min_degree_after: graph.min_degree(),
        });
    }

    ReductionChain {
        initial_trimmed,
        steps,
        core: graph,
        core_target: target,
        triangle_free_active,
    }
}

fn sorted_edges(graph: &ColoredGraph, mut slots: Vec<usize>) -> Vec<Edge> {
    slots.sort_unstable();
    slots
        .into_iter()
        .map(|slot| graph.public_edge(slot))
        .collect()
}

/// Extends a matching of `target_before - 1` edges over one step, using
/// the graph as it stood before the step. For a vertex removal the new
/// edge sits at the removed vertex and avoids the matching's vertices and
/// colors; for a class removal it is a class edge disjoint from the
/// matching (its color cannot already occur, the whole class was gone).
/// The smallest candidate in canonical order is chosen.
pub fn extend(
    matching: &Matching,
    step: &ReductionStep,
    graph_at_step: &ColoredGraph,
) -> Result<Matching, ExtendError> {
    if matching.len() + 1 != step.target_before {
        return Err(ExtendError::WrongMatchingSize {
            expected: step.target_before - 1,
            actual: matching.len(),
        });
    }
    let covered: Vec<VertexId> = matching.iter().flat_map(|e| [e.u, e.v]).collect();
    let used_colors: Vec<ColorId> = matching.iter().map(|e| e.color).collect();
    let free = |e: &Edge| !covered.contains(&e.u) && !covered.contains(&e.v);

    let candidate = match step.kind {
        ReductionKind::VertexRemoval(v) => graph_at_step.edges().into_iter().find(|e| {
            (e.u == v || e.v == v)
                && free_besides(e, v, &covered)
                && !used_colors.contains(&e.color)
        }),
        ReductionKind::ColorClassRemoval(c) => graph_at_step
            .edges()
            .into_iter()
            .find(|e| e.color == c && free(e) && !used_colors.contains(&e.color)),
    };

    match candidate {
        Some(edge) => {
            let mut edges = matching.edges.clone();
            edges.push(edge);
            Ok(Matching::new(edges))
        }
        None => Err(ExtendError::NoExtensionEdge {
            step: step.kind.to_string(),
        }),
    }
}

/// The endpoint of `e` other than `v` must be uncovered; `v` itself is
/// absent from the post-step graph and thus never covered.
fn free_besides(e: &Edge, v: VertexId, covered: &[VertexId]) -> bool {
    let other = if e.u == v { e.v } else { e.u };
    !covered.contains(&other)
}

/// Replays the whole chain backwards onto a copy of the core: restoring
/// every step's trimmed and primary removals reconstructs the graph as it
/// stood right after the initial trim.
pub fn replay_chain(chain: &ReductionChain) -> ColoredGraph {
    let mut work = chain.core.clone();
    for step in chain.steps.iter().rev() {
        work.restore_edges(&step.trimmed);
        work.restore_edges(&step.primary_removed);
        if let ReductionKind::VertexRemoval(v) = step.kind {
            work.restore_vertex(v);
        }
    }
    work
}

/// Folds [`extend`] over the reversed chain: restores each step's trimmed
/// and primary removals onto a working copy of the core and extends by one
/// edge per step. A matching of `core_target` edges in the core becomes a
/// matching of the original minimum degree.
pub fn extend_through_chain(
    chain: &ReductionChain,
    matching: Matching,
) -> Result<Matching, ExtendError> {
    let mut work = chain.core.clone();
    let mut current = matching;
    for step in chain.steps.iter().rev() {
        work.restore_edges(&step.trimmed);
        work.restore_edges(&step.primary_removed);
        if let ReductionKind::VertexRemoval(v) = step.kind {
            work.restore_vertex(v);
        }
        current = extend(&current, step, &work)?;
    }
    Ok(current)
}

/// Asserts the published properties of a finished chain against its core.
/// Used by tests and by callers that want a hard consistency check.
pub fn check_chain_invariants(chain: &ReductionChain) -> Result<(), GraphError> {
    let core = &chain.core;
    let fail = |detail: String| GraphError::Inconsistent { detail };
    if core.min_degree() < chain.core_target && core.edge_count() > 0 {
        return Err(fail("core minimum degree fell below the target".into()));
    }
    let target = chain.core_target;
    if target > 0 {
        if core.max_degree() > degree_bound(target, chain.triangle_free_active) {
            return Err(fail("core exceeds the maximum-degree bound".into()));
        }
        if core.color_classes().any(|(_, size)| size > 2 * target - 2) {
            return Err(fail("core has an oversized color class".into()));
        }
    } else if core.edge_count() > 0 {
        return Err(fail("a zero-target core must be edgeless".into()));
    }
    for e in core.edges() {
        let du = core
            .degree(e.u)
            .map_err(|_| fail("edge endpoint missing".into()))?;
        let dv = core
            .degree(e.v)
            .map_err(|_| fail("edge endpoint missing".into()))?;
        if du != target && dv != target {
            return Err(fail(format!(
                "core edge {e} touches no vertex of degree {target}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ColoredGraph;

    fn graph(edges: &[(u32, u32, u32)]) -> ColoredGraph {
        ColoredGraph::build(edges).unwrap()
    }

    fn k4() -> ColoredGraph {
        graph(&[
            (0, 1, 0),
            (2, 3, 0),
            (0, 2, 1),
            (1, 3, 1),
            (0, 3, 2),
            (1, 2, 2),
        ])
    }

    /// Triangle 0-1-2 plus pendant 2-3.
    fn triangle_with_pendant() -> ColoredGraph {
        graph(&[(0, 1, 0), (0, 2, 1), (1, 2, 2), (2, 3, 3)])
    }

    #[test]
    fn trim_respects_the_sequential_rule() {
        let mut g = triangle_with_pendant();
        let removed = trim(&mut g, 1).unwrap();
        // Canonical order processes (0,1) first while both endpoints have
        // degree 2; afterwards every other edge touches a degree-1 vertex.
        assert_eq!(
            removed,
            vec![Edge::new(VertexId(0), VertexId(1), ColorId(0))]
        );
        assert_eq!(g.edge_count(), 3);
        assert!(g.min_degree() >= 1);
    }

    #[test]
    fn trim_keeps_regular_graphs_intact() {
        let mut g = k4();
        assert!(trim(&mut g, 3).unwrap().is_empty());
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn trim_rejects_target_above_min_degree() {
        let mut g = triangle_with_pendant();
        assert_eq!(
            trim(&mut g, 2).unwrap_err(),
            ReduceError::TargetExceedsMinDegree {
                target: 2,
                min_degree: 1
            }
        );
    }

    /// Reference reimplementation: process edges in an arbitrary caller
    /// order, deleting on the same both-endpoints rule, repeated to a
    /// fixpoint. Used to check the postcondition over all orders.
    fn trim_any_order(edges: &[(u32, u32, u32)], order: &[usize], target: usize) -> Vec<bool> {
        let mut alive = vec![true; edges.len()];
        let mut degree = std::collections::HashMap::<u32, usize>::new();
        for &(u, v, _) in edges {
            *degree.entry(u).or_default() += 1;
            *degree.entry(v).or_default() += 1;
        }
        loop {
            let mut changed = false;
            for &idx in order {
                if !alive[idx] {
                    continue;
                }
                let (u, v, _) = edges[idx];
                if degree[&u] > target && degree[&v] > target {
                    alive[idx] = false;
                    *degree.get_mut(&u).unwrap() -= 1;
                    *degree.get_mut(&v).unwrap() -= 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        alive
    }

    #[test]
    fn trim_postcondition_holds_for_every_processing_order() {
        let edges = [(0u32, 1u32, 0u32), (0, 2, 1), (1, 2, 2), (2, 3, 3)];
        let target = 1usize;
        let mut order: Vec<usize> = (0..edges.len()).collect();
        // All 24 permutations of the four edges.
        let mut orders = Vec::new();
        permute(&mut order, 0, &mut orders);
        assert_eq!(orders.len(), 24);
        for order in orders {
            let alive = trim_any_order(&edges, &order, target);
            let mut degree = std::collections::HashMap::<u32, usize>::new();
            for (idx, &(u, v, _)) in edges.iter().enumerate() {
                if alive[idx] {
                    *degree.entry(u).or_default() += 1;
                    *degree.entry(v).or_default() += 1;
                }
            }
            for (idx, &(u, v, _)) in edges.iter().enumerate() {
                if alive[idx] {
                    assert!(
                        degree[&u] == target || degree[&v] == target,
                        "order {order:?} left edge {idx} with no endpoint at the target"
                    );
                }
            }
        }
    }

    fn permute(items: &mut Vec<usize>, at: usize, out: &mut Vec<Vec<usize>>) {
        if at == items.len() {
            out.push(items.clone());
            return;
        }
        for i in at..items.len() {
            items.swap(at, i);
            permute(items, at + 1, out);
            items.swap(at, i);
        }
    }

    #[test]
    fn reduce_star_removes_the_center() {
        let star = graph(&[(0, 1, 0), (0, 2, 1), (0, 3, 2), (0, 4, 3)]);
        let chain = reduce(star, false);
        assert_eq!(chain.steps.len(), 1);
        assert_eq!(
            chain.steps[0].kind,
            ReductionKind::VertexRemoval(VertexId(0))
        );
        assert_eq!(chain.steps[0].primary_removed.len(), 4);
        assert_eq!(chain.steps[0].target_before, 1);
        assert_eq!(chain.core_target, 0);
        assert_eq!(chain.core.edge_count(), 0);
        check_chain_invariants(&chain).unwrap();
    }

    /// Two perfect matchings of colors 0 and 1 on six vertices: the color
    /// classes have 3 = 2*2 - 1 edges at minimum degree 2, so the first
    /// step must be a class removal (smallest color on the size tie).
    fn two_matchings() -> ColoredGraph {
        graph(&[
            (0, 1, 0),
            (2, 3, 0),
            (4, 5, 0),
            (0, 2, 1),
            (1, 4, 1),
            (3, 5, 1),
        ])
    }

    #[test]
    fn reduce_prefers_vertex_rule_then_class_rule() {
        let chain = reduce(two_matchings(), false);
        assert_eq!(
            chain.steps[0].kind,
            ReductionKind::ColorClassRemoval(ColorId(0))
        );
        check_chain_invariants(&chain).unwrap();
    }

    #[test]
    fn reduce_leaves_k4_untouched() {
        let chain = reduce(k4(), false);
        assert!(chain.steps.is_empty());
        assert!(chain.initial_trimmed.is_empty());
        assert_eq!(chain.core_target, 3);
        assert_eq!(chain.core.edge_count(), 6);
        check_chain_invariants(&chain).unwrap();
    }

    #[test]
    fn replaying_the_chain_rebuilds_the_trimmed_input() {
        let original = two_matchings();
        let mut trimmed_input = original.clone();
        trim_in_place(&mut trimmed_input, original.min_degree());
        let chain = reduce(original, false);
        let mut work = chain.core.clone();
        for step in chain.steps.iter().rev() {
            work.restore_edges(&step.trimmed);
            work.restore_edges(&step.primary_removed);
            if let ReductionKind::VertexRemoval(v) = step.kind {
                work.restore_vertex(v);
            }
        }
        assert_eq!(work.edges(), trimmed_input.edges());
        work.validate().unwrap();
    }

    #[test]
    fn extend_through_star_chain() {
        let star = graph(&[(0, 1, 0), (0, 2, 1), (0, 3, 2), (0, 4, 3)]);
        let chain = reduce(star.clone(), false);
        let extended = extend_through_chain(&chain, Matching::default()).unwrap();
        assert_eq!(extended.len(), 1);
        assert!(star.verify_matching(&extended));
        let e = extended.edges[0];
        assert!(e.u == VertexId(0) || e.v == VertexId(0));
    }

    #[test]
    fn extend_picks_the_uncovered_class_edge() {
        let g = two_matchings();
        let step = ReductionStep {
            kind: ReductionKind::ColorClassRemoval(ColorId(0)),
            primary_removed: vec![
                Edge::new(VertexId(0), VertexId(1), ColorId(0)),
                Edge::new(VertexId(2), VertexId(3), ColorId(0)),
                Edge::new(VertexId(4), VertexId(5), ColorId(0)),
            ],
            trimmed: Vec::new(),
            target_before: 2,
            min_degree_after: 1,
        };
        let matching = Matching::new(vec![Edge::new(VertexId(0), VertexId(2), ColorId(1))]);
        let extended = extend(&matching, &step, &g).unwrap();
        assert_eq!(extended.len(), 2);
        assert_eq!(
            extended.edges[1],
            Edge::new(VertexId(4), VertexId(5), ColorId(0))
        );
    }

    #[test]
    fn extend_rejects_wrong_matching_size() {
        let g = two_matchings();
        let step = ReductionStep {
            kind: ReductionKind::ColorClassRemoval(ColorId(0)),
            primary_removed: Vec::new(),
            trimmed: Vec::new(),
            target_before: 2,
            min_degree_after: 1,
        };
        let err = extend(&Matching::default(), &step, &g).unwrap_err();
        assert_eq!(
            err,
            ExtendError::WrongMatchingSize {
                expected: 1,
                actual: 0
            }
        );
    }

    #[test]
    fn reduction_targets_decrease_one_per_step() {
        let g = crate::generators::random_properly_colored(30, 4, crate::rng::Seed(3)).unwrap();
        let delta = g.min_degree();
        let chain = reduce(g, false);
        assert_eq!(chain.core_target, delta - chain.steps.len());
        for (i, step) in chain.steps.iter().enumerate() {
            assert_eq!(step.target_before, delta - i);
            assert!(step.min_degree_after >= step.target_before - 1);
        }
        check_chain_invariants(&chain).unwrap();
    }
}
