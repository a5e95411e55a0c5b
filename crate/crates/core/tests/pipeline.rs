//! Cross-module properties: the pipeline against the exact oracle, chain
//! replay, trim postconditions, and verifier equivalence, driven both by
//! proptest over raw inputs and by the crate's own seeded generators.

use proptest::prelude::*;
use rainbow_core::bench::{doubling_ratios, scaling_run};
use rainbow_core::generators::{
    complete_bipartite_colored, cyclic_latin, latin_to_bipartite, random_bipartite_colored,
    random_properly_colored, shuffled_latin,
};
use rainbow_core::graph::{ColoredGraph, Edge, Matching};
use rainbow_core::greedy::{check_trace, find_rainbow_matching, greedy_matching, threshold};
use rainbow_core::oracle::max_rainbow_matching;
use rainbow_core::reduce::{check_chain_invariants, extend_through_chain, reduce, replay_chain};
use rainbow_core::rng::{Seed, SplitMix64};
use std::collections::HashSet;

/// Exhaustive all-subsets maximum rainbow matching; the oracle's oracle.
fn naive_max_rainbow_matching(graph: &ColoredGraph) -> usize {
    let edges = graph.edges();
    assert!(edges.len() <= 20, "naive enumeration is exponential");
    let mut best = 0;
    for mask in 0u32..(1u32 << edges.len()) {
        let subset: Vec<Edge> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if subset.len() > best && is_rainbow_matching_setwise(&subset) {
            best = subset.len();
        }
    }
    best
}

/// Set-based rainbow matching check, independent of the pairwise loops
/// inside `ColoredGraph::verify_matching`.
fn is_rainbow_matching_setwise(edges: &[Edge]) -> bool {
    let mut vertices = HashSet::new();
    let mut colors = HashSet::new();
    for e in edges {
        if !vertices.insert(e.u) || !vertices.insert(e.v) || !colors.insert(e.color) {
            return false;
        }
    }
    true
}

/// Small-instance parameter grid keeping edge counts within the naive cap.
fn small_instance(index: u64) -> ColoredGraph {
    let shapes = [
        (5usize, 1usize),
        (7, 1),
        (9, 1),
        (6, 2),
        (8, 2),
        (5, 2),
        (4, 3),
    ];
    let (n, delta) = shapes[(index % shapes.len() as u64) as usize];
    random_properly_colored(n, delta, Seed(index)).unwrap()
}

#[test]
fn oracle_agrees_with_naive_enumeration() {
    let mut checked = 0;
    for index in 0..120u64 {
        let g = small_instance(index);
        if g.edge_count() > 12 {
            continue;
        }
        let exact = max_rainbow_matching(&g, 40).unwrap();
        assert!(g.verify_matching(&exact.witness));
        assert_eq!(
            exact.max_size,
            naive_max_rainbow_matching(&g),
            "seed {index}"
        );
        checked += 1;
    }
    assert!(
        checked >= 30,
        "grid produced too few small instances ({checked})"
    );

    // Structured instances too.
    for n in 1..=3 {
        let g = latin_to_bipartite(&cyclic_latin(n).unwrap());
        assert_eq!(
            max_rainbow_matching(&g, 40).unwrap().max_size,
            naive_max_rainbow_matching(&g)
        );
    }
}

#[test]
fn pipeline_never_beats_the_oracle() {
    for index in 0..200u64 {
        let g = small_instance(index);
        if g.edge_count() > 40 {
            continue;
        }
        let report = find_rainbow_matching(&g, false).unwrap();
        assert!(g.verify_matching(&report.matching), "seed {index}");
        let exact = max_rainbow_matching(&g, 40).unwrap();
        assert!(
            report.matching.len() <= exact.max_size,
            "seed {index}: pipeline {} > oracle {}",
            report.matching.len(),
            exact.max_size
        );
    }
}

#[test]
fn oracle_max_is_monotone_under_edge_removal() {
    for index in 0..40u64 {
        let g = small_instance(index);
        let edges = g.edges();
        if edges.len() < 2 {
            continue;
        }
        let full = max_rainbow_matching(&g, 40).unwrap().max_size;
        // Dropping any single edge can only keep or lower the maximum.
        let mut rng = SplitMix64::new(Seed(index));
        let drop = rng.next_below(edges.len() as u64) as usize;
        let reduced_edges: Vec<(u32, u32, u32)> = edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, e)| (e.u.0, e.v.0, e.color.0))
            .collect();
        let smaller = ColoredGraph::build(&reduced_edges).unwrap();
        let reduced = max_rainbow_matching(&smaller, 40).unwrap().max_size;
        assert!(reduced <= full);
        assert!(full <= reduced + 1);
    }
}

#[test]
fn extension_succeeds_on_a_hundred_random_chains() {
    let mut extended = 0;
    for seed in 0..100u64 {
        let delta = 2 + (seed % 4) as usize;
        let n = 12 + (seed % 17) as usize;
        let g = random_properly_colored(n, delta, Seed(seed)).unwrap();
        let chain = reduce(g.clone(), false);
        check_chain_invariants(&chain).unwrap();
        let (greedy_result, _) = greedy_matching(&chain.core, chain.core_target);
        if greedy_result.len() < chain.core_target {
            continue;
        }
        let mut truncated = greedy_result;
        truncated.edges.truncate(chain.core_target);
        let full = extend_through_chain(&chain, truncated).expect("extension must not fail");
        assert_eq!(full.len(), chain.core_target + chain.steps.len());
        assert!(g.verify_matching(&full));
        extended += 1;
    }
    assert!(
        extended >= 90,
        "extension exercised on only {extended} chains"
    );
}

#[test]
fn chain_replay_reconstructs_the_trimmed_input() {
    for seed in 0..30u64 {
        let g = random_properly_colored(14 + (seed % 9) as usize, 3, Seed(seed)).unwrap();
        let mut trimmed_input = g.clone();
        rainbow_core::reduce::trim(&mut trimmed_input, g.min_degree()).unwrap();
        let chain = reduce(g, false);
        let work = replay_chain(&chain);
        assert_eq!(work.edges(), trimmed_input.edges(), "seed {seed}");
        work.validate().unwrap();
    }
}

#[test]
fn traces_are_clean_across_a_mixed_corpus() {
    for seed in 0..150u64 {
        let delta = 1 + (seed % 5) as usize;
        let n = delta + 2 + (seed % 23) as usize;
        let g = random_properly_colored(n, delta, Seed(seed)).unwrap();
        let report = find_rainbow_matching(&g, false).unwrap();
        let violations = check_trace(&report.trace, report.chain_summary.core_edge_count);
        assert!(violations.is_empty(), "seed {seed}: {violations:?}");
    }
}

#[test]
fn bipartite_pipeline_with_triangle_free_rule() {
    for seed in 0..40u64 {
        let delta = 2 + (seed % 3) as usize;
        let side = delta.max(6) + (seed % 5) as usize;
        let g = random_bipartite_colored(side, side, delta, Seed(seed)).unwrap();
        let report = find_rainbow_matching(&g, true).unwrap();
        assert!(report.used_triangle_free);
        assert!(g.verify_matching(&report.matching));
        if report.threshold_value.exceeded_by(g.vertex_count()) {
            assert_eq!(report.matching.len(), delta, "seed {seed}");
            assert!(report.guarantee_met);
        }
    }
}

#[test]
fn k_delta_n_minus_delta_caps_at_delta() {
    let g = complete_bipartite_colored(4, 36).unwrap();
    let report = find_rainbow_matching(&g, false).unwrap();
    assert_eq!(report.matching.len(), 4);

    let narrow = complete_bipartite_colored(3, 9).unwrap();
    assert_eq!(max_rainbow_matching(&narrow, 40).unwrap().max_size, 3);
}

#[test]
fn pipeline_stays_valid_on_latin_encodings() {
    // K_{n,n} sits below the threshold for delta = n, so only validity
    // and trace health are owed, not the full size.
    for n in 2..=7usize {
        let g = latin_to_bipartite(&cyclic_latin(n).unwrap());
        let report = find_rainbow_matching(&g, true).unwrap();
        assert!(g.verify_matching(&report.matching), "order {n}");
        assert!(report.matching.len() <= n);
        let violations = check_trace(&report.trace, report.chain_summary.core_edge_count);
        assert!(violations.is_empty(), "order {n}: {violations:?}");
    }
}

#[test]
fn shuffled_latin_squares_keep_their_transversal_count_parity() {
    // Row/column/symbol permutations preserve transversals, so the
    // bipartite maxima must be permutation-invariant.
    for n in 2..=5usize {
        let base = cyclic_latin(n).unwrap();
        let base_max = max_rainbow_matching(&latin_to_bipartite(&base), n * n)
            .unwrap()
            .max_size;
        for seed in 0..5u64 {
            let shuffled = shuffled_latin(&base, Seed(seed));
            let shuffled_max = max_rainbow_matching(&latin_to_bipartite(&shuffled), n * n)
                .unwrap()
                .max_size;
            assert_eq!(base_max, shuffled_max, "order {n} seed {seed}");
        }
    }
}

#[test]
fn pipelines_run_concurrently_on_distinct_graphs() {
    let handles: Vec<_> = (0..8u64)
        .map(|seed| {
            std::thread::spawn(move || {
                let g = random_properly_colored(20, 3, Seed(seed)).unwrap();
                let report = find_rainbow_matching(&g, false).unwrap();
                assert!(g.verify_matching(&report.matching));
                report.matching.len()
            })
        })
        .collect();
    // n = 20 sits above the threshold for delta 3, so every thread must
    // deliver the full size.
    for handle in handles {
        assert_eq!(handle.join().unwrap(), 3);
    }
}

#[test]
fn bench_rows_report_full_matchings() {
    let rows = scaling_run(&[3], &[15, 30], 3, Seed(9)).unwrap();
    assert!(rows.iter().all(|r| r.matching_size == 3));
    assert_eq!(doubling_ratios(&rows).len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Raw inputs: whenever `build` accepts, every structural invariant
    /// holds and the edge multiset round-trips.
    #[test]
    fn build_invariants_on_arbitrary_inputs(
        raw in proptest::collection::vec((0u32..24, 0u32..24, 0u32..8), 0..40)
    ) {
        if let Ok(g) = ColoredGraph::build(&raw) {
            g.validate().unwrap();
            prop_assert_eq!(g.edge_count(), raw.len());
            let mut expected: Vec<Edge> = raw
                .iter()
                .map(|&(u, v, c)| Edge::new(
                    rainbow_core::VertexId(u),
                    rainbow_core::VertexId(v),
                    rainbow_core::ColorId(c),
                ))
                .collect();
            expected.sort();
            prop_assert_eq!(g.edges(), expected);
            for v in g.vertices().collect::<Vec<_>>() {
                prop_assert_eq!(g.color_degree(v).unwrap(), g.degree(v).unwrap());
            }
        }
    }

    /// The pairwise verifier agrees with an independent set-based check
    /// on arbitrary claimed matchings (valid or not).
    #[test]
    fn verifier_matches_setwise_check(seed in 0u64..5000, subset_bits in 0u32..,) {
        let g = small_instance(seed);
        let edges = g.edges();
        let claimed: Vec<Edge> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| (subset_bits >> (i % 32)) & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let setwise = is_rainbow_matching_setwise(&claimed);
        prop_assert_eq!(g.verify_matching(&Matching::new(claimed)), setwise);
    }

    /// Trim leaves no edge with both endpoints above the target and never
    /// drags the minimum degree below it.
    #[test]
    fn trim_postcondition(seed in 0u64..2000, delta in 2usize..5) {
        let n = delta * 3 + (seed % 10) as usize;
        let mut g = random_properly_colored(n, delta, Seed(seed)).unwrap();
        let target = 1 + (seed as usize % delta);
        let removed = rainbow_core::trim(&mut g, target).unwrap();
        prop_assert!(g.min_degree() >= target);
        for e in g.edges() {
            let du = g.degree(e.u).unwrap();
            let dv = g.degree(e.v).unwrap();
            prop_assert!(du == target || dv == target);
        }
        prop_assert_eq!(g.validate(), Ok(()));
        // Removed edges plus remaining edges partition the original set.
        let mut union = g.edges();
        union.extend(removed);
        union.sort();
        let total = union.len();
        union.dedup();
        prop_assert_eq!(union.len(), total);
    }

    /// One deletion step removes the chosen color entirely and isolates
    /// the chosen endpoints, shrinking m by exactly the returned count.
    #[test]
    fn delete_step_postcondition(seed in 0u64..2000) {
        let g0 = small_instance(seed);
        let edges = g0.edges();
        prop_assume!(!edges.is_empty());
        let pick = edges[(seed as usize * 7) % edges.len()];
        let mut g = g0.clone();
        let before = g.edge_count();
        let removed = g.delete_step(pick).unwrap();
        prop_assert_eq!(g.edge_count(), before - removed.len());
        for e in g.edges() {
            prop_assert!(e.color != pick.color);
            for banned in [pick.u, pick.v] {
                prop_assert!(e.u != banned && e.v != banned);
            }
        }
        prop_assert_eq!(g.validate(), Ok(()));
    }

    /// End-to-end determinism: one seed, two full pipeline runs, equal
    /// reports (matching, trace, and chain summary alike).
    #[test]
    fn pipeline_is_deterministic(seed in 0u64..3000) {
        let delta = 1 + (seed % 4) as usize;
        let n = delta + 2 + (seed % 12) as usize;
        let g1 = random_properly_colored(n, delta, Seed(seed)).unwrap();
        let g2 = random_properly_colored(n, delta, Seed(seed)).unwrap();
        let r1 = find_rainbow_matching(&g1, false).unwrap();
        let r2 = find_rainbow_matching(&g2, false).unwrap();
        prop_assert_eq!(r1, r2);
    }

    /// The greedy output is always a rainbow matching, threshold or not.
    #[test]
    fn greedy_always_yields_a_rainbow_matching(seed in 0u64..3000) {
        let delta = 1 + (seed % 4) as usize;
        let n = delta + 2 + (seed % 9) as usize;
        let g = random_properly_colored(n, delta, Seed(seed)).unwrap();
        let (matching, trace) = greedy_matching(&g, delta);
        prop_assert!(g.verify_matching(&matching));
        prop_assert_eq!(trace.matching_size(), matching.len());
        let removed_sum: usize = trace.steps.iter().map(|s| s.removed_total).sum();
        prop_assert_eq!(removed_sum, g.edge_count());
    }

    /// Above the threshold the pipeline always reaches the minimum degree.
    #[test]
    fn guarantee_holds_above_threshold(seed in 0u64..800, delta in 2usize..6) {
        let bound = threshold(delta, false).unwrap();
        let n = (bound.floor() + 1) as usize + (seed % 5) as usize;
        let g = random_properly_colored(n, delta, Seed(seed)).unwrap();
        let report = find_rainbow_matching(&g, false).unwrap();
        prop_assert!(report.guarantee_met);
        prop_assert_eq!(report.matching.len(), delta);
        prop_assert!(g.verify_matching(&report.matching));
    }
}
