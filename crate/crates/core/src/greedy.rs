//! The greedy matcher, the order thresholds that guarantee success, the
//! end-to-end pipeline, and the runtime checker for the per-step counting
//! bounds the matcher's analysis relies on.
//!
//! Each greedy step picks a smallest color class, inside it an edge with
//! minimum endpoint degree sum, claims that edge for the matching, and
//! deletes its neighborhood together with the rest of its class. The trace
//! records enough per-step bookkeeping that the counting inequalities
//! behind the guarantee can be re-asserted on every run.

use crate::graph::{ColorId, ColoredGraph, Edge, Matching, VertexId};
use crate::reduce::{extend_through_chain, reduce, ExtendError, ReductionChain, ReductionKind};
use std::fmt;

/// Exact nonnegative rational, reduced, with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    fn new(num: i64, den: i64) -> Self {
        debug_assert!(den > 0);
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        Rational {
            num: num / g,
            den: den / g,
        }
    }

    pub fn zero() -> Self {
        Rational { num: 0, den: 1 }
    }

    /// True iff `n` is strictly greater than this value.
    pub fn exceeded_by(&self, n: usize) -> bool {
        (n as i128) * (self.den as i128) > self.num as i128
    }

    pub fn floor(&self) -> i64 {
        self.num.div_euclid(self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdError {
    ZeroDelta,
}

impl fmt::Display for ThresholdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "the order threshold needs a positive minimum degree")
    }
}

impl std::error::Error for ThresholdError {}

/// Order bound above which a graph of minimum degree `delta` is
/// guaranteed a rainbow matching of size `delta`:
/// `13*delta/2 - 23/2 + 41/(8*delta)`, improving to
/// `49*delta/8 - 21/2 + 9/(2*delta)` on triangle-free graphs.
pub fn threshold(delta: usize, triangle_free: bool) -> Result<Rational, ThresholdError> {
    if delta == 0 {
        return Err(ThresholdError::ZeroDelta);
    }
    let d = delta as i64;
    let num = if triangle_free {
        49 * d * d - 84 * d + 36
    } else {
        52 * d * d - 92 * d + 41
    };
    Ok(Rational::new(num, 8 * d))
}

/// Bookkeeping for one greedy step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyStepRecord {
    /// 1-based step number.
    pub index: usize,
    pub chosen_color: ColorId,
    /// Size of the smallest color class when the step ran.
    pub class_size: usize,
    /// The edge claimed for the matching.
    pub edge: Edge,
    /// Endpoint degree sum of `edge` at the start of the step.
    pub degree_sum: usize,
    /// Excess of `degree_sum` over twice the target, floored at zero.
    pub degree_excess: usize,
    /// All edges deleted by this step.
    pub removed_total: usize,
    /// Deleted edges of the chosen color not incident to `edge`.
    pub same_color_nonincident: usize,
}

/// Full trace of a greedy run with the post-hoc fields filled in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTrace {
    /// The degree target the run was measured against.
    pub target: usize,
    pub steps: Vec<GreedyStepRecord>,
    /// Vertices of the run's input graph not covered by the matching.
    pub uncovered: Vec<VertexId>,
    /// Per step: deleted chosen-color edges with both endpoints uncovered.
    pub uncovered_same_color: Vec<usize>,
    /// Last 1-based step that completely removed a color class absent
    /// from the final matching; 0 when no such step exists.
    pub last_unmatched_color_step: usize,
}

impl GreedyTrace {
    /// Every step contributes one matching edge.
    pub fn matching_size(&self) -> usize {
        self.steps.len()
    }
}

struct StepLog {
    chosen_slot: usize,
    removed_slots: Vec<usize>,
}

fn run_greedy(mut graph: ColoredGraph, target: usize) -> (Matching, GreedyTrace, Vec<StepLog>) {
    let alive_at_start = graph.vertex_alive.clone();
    let mut steps = Vec::new();
    let mut logs: Vec<StepLog> = Vec::new();
    let mut chosen_edges = Vec::new();

    while graph.edge_count() > 0 {
        // Smallest live class, ties to the smallest color.
        let (class, class_size) = graph
            .class_size
            .iter()
            .enumerate()
            .filter(|&(_, &size)| size > 0)
            .min_by_key(|&(idx, &size)| (size, idx))
            .map(|(idx, &size)| (idx, size))
            .expect("nonempty graph has a nonempty class");

        // Within the class, the minimum endpoint degree sum; class slot
        // lists ascend, so the first minimum is the canonical smallest.
        let mut chosen = None;
        for &slot in &graph.classes[class] {
            if !graph.alive[slot] {
                continue;
            }
            let s = graph.slots[slot];
            let sum = graph.degree[s.u] + graph.degree[s.v];
            if chosen.is_none_or(|(best_sum, _)| sum < best_sum) {
                chosen = Some((sum, slot));
            }
        }
        let (degree_sum, slot) = chosen.expect("nonempty class has a live edge");
        let edge = graph.public_edge(slot);
        let (eu, ev) = (graph.slots[slot].u, graph.slots[slot].v);

        let removed_slots = graph.delete_step_slots(slot);
        let same_color_nonincident = removed_slots
            .iter()
            .filter(|&&r| {
                let s = graph.slots[r];
                r != slot && s.color == class && s.u != eu && s.u != ev && s.v != eu && s.v != ev
            })
            .count();

        steps.push(GreedyStepRecord {
            index: steps.len() + 1,
            chosen_color: ColorId(graph.color_ids[class]),
            class_size,
            edge,
            degree_sum,
            degree_excess: degree_sum.saturating_sub(2 * target),
            removed_total: removed_slots.len(),
            same_color_nonincident,
        });
        chosen_edges.push(edge);
        logs.push(StepLog {
            chosen_slot: slot,
            removed_slots,
        });
    }

    // Post-hoc fields need the final matching: uncovered vertices, the
    // per-step uncovered same-color counts, and the last step that wiped
    // out a color class the matching never used.
    let mut covered = vec![false; graph.vertex_ids.len()];
    for log in &logs {
        let s = graph.slots[log.chosen_slot];
        covered[s.u] = true;
        covered[s.v] = true;
    }
    let uncovered: Vec<VertexId> = (0..graph.vertex_ids.len())
        .filter(|&idx| alive_at_start[idx] && !covered[idx])
        .map(|idx| VertexId(graph.vertex_ids[idx]))
        .collect();

    let uncovered_same_color: Vec<usize> = logs
        .iter()
        .map(|log| {
            let class = graph.slots[log.chosen_slot].color;
            log.removed_slots
                .iter()
                .filter(|&&r| {
                    let s = graph.slots[r];
                    s.color == class && !covered[s.u] && !covered[s.v]
                })
                .count()
        })
        .collect();

    let chosen_colors: Vec<usize> = logs
        .iter()
        .map(|log| graph.slots[log.chosen_slot].color)
        .collect();
    let mut remaining = vec![0usize; graph.color_ids.len()];
    for log in &logs {
        for &r in &log.removed_slots {
            remaining[graph.slots[r].color] += 1;
        }
    }
    let mut last_unmatched_color_step = 0;
    for (pos, log) in logs.iter().enumerate() {
        for &r in &log.removed_slots {
            let color = graph.slots[r].color;
            remaining[color] -= 1;
            if remaining[color] == 0 && !chosen_colors.contains(&color) {
                last_unmatched_color_step = pos + 1;
            }
        }
    }

    let trace = GreedyTrace {
        target,
        steps,
        uncovered,
        uncovered_same_color,
        last_unmatched_color_step,
    };
    (Matching::new(chosen_edges), trace, logs)
}

/// Runs the greedy matcher on a private copy of `core`. Always terminates
/// (every step deletes at least one edge) and always yields a rainbow
/// matching; the size guarantee additionally needs the core invariants
/// and the order threshold.
pub fn greedy_matching(core: &ColoredGraph, target: usize) -> (Matching, GreedyTrace) {
    let (matching, trace, _) = run_greedy(core.clone(), target);
    (matching, trace)
}

/// A violated trace bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceViolation {
    pub kind: ViolationKind,
    /// 1-based step the violation is anchored to, when per-step.
    pub step: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// A class size fell by more than two between consecutive steps.
    ClassSizeDrop,
    /// The chain `uncovered_same_color <= same_color_nonincident <= class_size - 1` broke.
    SameColorCountBound,
    /// The recorded degree excess disagrees with its definition.
    DegreeExcessMismatch,
    /// The degree excess exceeds the maximum the degree bounds allow.
    DegreeExcessRange,
    /// A step removed more edges than the per-step bound allows.
    StepRemovalBound,
    /// The removal totals do not sum to the core edge count.
    EdgeConservation,
    /// After the last unmatched-color step of a failed run, an edge was
    /// chosen with endpoint degree sum above `2 * (target - 1)`.
    LateDegreeSum,
    /// The trace's parallel arrays disagree in length.
    MalformedTrace,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ViolationKind::ClassSizeDrop => "class_size_drop",
            ViolationKind::SameColorCountBound => "same_color_count_bound",
            ViolationKind::DegreeExcessMismatch => "degree_excess_mismatch",
            ViolationKind::DegreeExcessRange => "degree_excess_range",
            ViolationKind::StepRemovalBound => "step_removal_bound",
            ViolationKind::EdgeConservation => "edge_conservation",
            ViolationKind::LateDegreeSum => "late_degree_sum",
            ViolationKind::MalformedTrace => "malformed_trace",
        };
        write!(f, "{name}")
    }
}

impl fmt::Display for TraceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(step) => write!(f, "{} at step {}: {}", self.kind, step, self.detail),
            None => write!(f, "{}: {}", self.kind, self.detail),
        }
    }
}

/// Asserts the counting bounds a healthy greedy run must satisfy. An empty
/// result certifies the trace; each entry names the broken bound.
///
/// Checked per step i (t = target): the smallest class shrinks by at most
/// two per step; `f_i <= g_i <= c_i - 1` for the same-color counts; the
/// degree excess matches its definition and, for t >= 2, stays at most
/// `2t - 3`; the step removes at most `2t + excess + g_i - 1` edges; the
/// removals sum to the core edge count; and on failed runs (size < t)
/// every step after `last_unmatched_color_step` has degree sum at most
/// `2(t - 1)` — that bound is what the failure analysis derives, and it
/// genuinely need not hold on successful runs.
pub fn check_trace(trace: &GreedyTrace, core_edge_count: usize) -> Vec<TraceViolation> {
    let mut violations = Vec::new();
    let t = trace.target;
    let mut push = |kind, step, detail: String| {
        violations.push(TraceViolation { kind, step, detail });
    };

    if trace.uncovered_same_color.len() != trace.steps.len() {
        push(
            ViolationKind::MalformedTrace,
            None,
            format!(
                "{} uncovered counts for {} steps",
                trace.uncovered_same_color.len(),
                trace.steps.len()
            ),
        );
        return violations;
    }

    for pair in trace.steps.windows(2) {
        if pair[1].class_size + 2 < pair[0].class_size {
            push(
                ViolationKind::ClassSizeDrop,
                Some(pair[1].index),
                format!(
                    "class size fell from {} to {}",
                    pair[0].class_size, pair[1].class_size
                ),
            );
        }
    }

    for (step, &f) in trace.steps.iter().zip(&trace.uncovered_same_color) {
        let g = step.same_color_nonincident;
        if f > g || g + 1 > step.class_size {
            push(
                ViolationKind::SameColorCountBound,
                Some(step.index),
                format!("f={f}, g={g}, class size {}", step.class_size),
            );
        }
        let expected_excess = step.degree_sum.saturating_sub(2 * t);
        if step.degree_excess != expected_excess {
            push(
                ViolationKind::DegreeExcessMismatch,
                Some(step.index),
                format!(
                    "recorded excess {} but degree sum {} over target {t} gives {expected_excess}",
                    step.degree_excess, step.degree_sum
                ),
            );
        }
        if t >= 2 && step.degree_excess > 2 * t - 3 {
            push(
                ViolationKind::DegreeExcessRange,
                Some(step.index),
                format!("excess {} above the cap {}", step.degree_excess, 2 * t - 3),
            );
        }
        let removal_cap = 2 * t + step.degree_excess + g;
        if step.removed_total + 1 > removal_cap {
            push(
                ViolationKind::StepRemovalBound,
                Some(step.index),
                format!(
                    "removed {} edges, cap {}",
                    step.removed_total,
                    removal_cap - 1
                ),
            );
        }
    }

    let removed_sum: usize = trace.steps.iter().map(|s| s.removed_total).sum();
    if removed_sum != core_edge_count {
        push(
            ViolationKind::EdgeConservation,
            None,
            format!("steps removed {removed_sum} edges of {core_edge_count}"),
        );
    }

    // The late-step degree bound comes from counting live classes on a
    // run that fell short; a successful run can legitimately exceed it.
    if trace.matching_size() < t {
        for step in &trace.steps {
            if step.index > trace.last_unmatched_color_step && step.degree_sum > 2 * (t - 1) {
                push(
                    ViolationKind::LateDegreeSum,
                    Some(step.index),
                    format!(
                        "degree sum {} after step {} on a failed run",
                        step.degree_sum, trace.last_unmatched_color_step
                    ),
                );
            }
        }
    }

    violations
}

/// Per-step view of the reduction for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepSummary {
    pub kind: ReductionKind,
    pub removed: usize,
    pub trimmed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSummary {
    pub vertex_removals: usize,
    pub color_class_removals: usize,
    pub initial_trimmed: usize,
    pub core_edge_count: usize,
    pub core_target: usize,
    pub steps: Vec<StepSummary>,
}

impl ChainSummary {
    fn from_chain(chain: &ReductionChain) -> Self {
        ChainSummary {
            vertex_removals: chain.vertex_removal_count(),
            color_class_removals: chain.color_class_removal_count(),
            initial_trimmed: chain.initial_trimmed.len(),
            core_edge_count: chain.core.edge_count(),
            core_target: chain.core_target,
            steps: chain
                .steps
                .iter()
                .map(|s| StepSummary {
                    kind: s.kind,
                    removed: s.primary_removed.len(),
                    trimmed: s.trimmed.len(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineReport {
    pub matching: Matching,
    /// True iff the order exceeded the threshold and the full-size
    /// matching was delivered.
    pub guarantee_met: bool,
    pub threshold_value: Rational,
    /// Whether the triangle-free rule and threshold actually applied.
    pub used_triangle_free: bool,
    pub chain_summary: ChainSummary,
    pub trace: GreedyTrace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineError {
    Extend(ExtendError),
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Extend(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PipelineError {}

impl From<ExtendError> for PipelineError {
    fn from(e: ExtendError) -> Self {
        PipelineError::Extend(e)
    }
}

/// The whole pipeline: reduce, run the greedy matcher on the core, and
/// extend the result back through the chain. Above the threshold this
/// returns a rainbow matching of size equal to the minimum degree; below
/// it the best matching obtained is returned with `guarantee_met` false.
pub fn find_rainbow_matching(
    graph: &ColoredGraph,
    use_triangle_free: bool,
) -> Result<PipelineReport, PipelineError> {
    let n = graph.vertex_count();
    let delta = graph.min_degree();
    if delta == 0 {
        // An edgeless graph: the empty matching already has size delta.
        return Ok(PipelineReport {
            matching: Matching::default(),
            guarantee_met: true,
            threshold_value: Rational::zero(),
            used_triangle_free: use_triangle_free,
            chain_summary: ChainSummary {
                vertex_removals: 0,
                color_class_removals: 0,
                initial_trimmed: 0,
                core_edge_count: 0,
                core_target: 0,
                steps: Vec::new(),
            },
            trace: GreedyTrace {
                target: 0,
                steps: Vec::new(),
                uncovered: graph.vertices().collect(),
                uncovered_same_color: Vec::new(),
                last_unmatched_color_step: 0,
            },
        });
    }

    let chain = reduce(graph.clone(), use_triangle_free);
    let threshold_value =
        threshold(delta, chain.triangle_free_active).expect("delta is positive here");
    let chain_summary = ChainSummary::from_chain(&chain);
    let (greedy_result, trace) = greedy_matching(&chain.core, chain.core_target);

    let (matching, achieved) = if greedy_result.len() >= chain.core_target {
        // Extension needs exactly one missing edge per level, so a surplus
        // is cut back to the earliest `core_target` edges.
        let mut truncated = greedy_result;
        truncated.edges.truncate(chain.core_target);
        let full = extend_through_chain(&chain, truncated)?;
        let achieved = full.len() == delta;
        (full, achieved)
    } else {
        (greedy_result, false)
    };

    debug_assert!(graph.verify_matching(&matching));
    Ok(PipelineReport {
        guarantee_met: achieved && threshold_value.exceeded_by(n),
        matching,
        threshold_value,
        used_triangle_free: chain.triangle_free_active,
        chain_summary,
        trace,
    })
}
