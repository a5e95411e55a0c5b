//! Wall-clock scaling measurements for the pipeline over a (delta, n)
//! grid, reported as CSV rows plus soft-checked doubling ratios.
//!
//! Per cell, `reps` seeded instances are generated (generation and
//! validation excluded from timing), the pipeline is timed on each, and
//! the median is kept. A quadratic-per-step pipeline should show time
//! ratios near 4 when n doubles; ratios are only flagged PASS/WARN
//! against a slack cap of 5 so that wall-clock noise cannot fail a build.

use crate::generators::{random_properly_colored, GenError};
use crate::greedy::{find_rainbow_matching, threshold, PipelineError};
use crate::rng::{Seed, SplitMix64};
use std::fmt;
use std::time::{Duration, Instant};

/// Doubling ratios at or below this flag PASS, above it WARN.
pub const DOUBLING_RATIO_SOFT_CAP: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub delta: usize,
    pub n: usize,
    /// Median instance edge count across the reps.
    pub m: usize,
    pub reps: usize,
    /// Median pipeline wall time across the reps.
    pub median: Duration,
    /// Smallest matching size seen across the reps.
    pub matching_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchError {
    /// Every benchmarked cell must sit above the guarantee threshold.
    BelowThreshold {
        delta: usize,
        n: usize,
    },
    /// Medians need at least three repetitions.
    TooFewReps {
        reps: usize,
    },
    Gen(GenError),
    Pipeline(PipelineError),
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::BelowThreshold { delta, n } => {
                write!(
                    f,
                    "cell (delta {delta}, n {n}) is below the guarantee threshold"
                )
            }
            BenchError::TooFewReps { reps } => {
                write!(f, "need at least 3 reps for a median, got {reps}")
            }
            BenchError::Gen(e) => write!(f, "{e}"),
            BenchError::Pipeline(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for BenchError {}

impl From<GenError> for BenchError {
    fn from(e: GenError) -> Self {
        BenchError::Gen(e)
    }
}

impl From<PipelineError> for BenchError {
    fn from(e: PipelineError) -> Self {
        BenchError::Pipeline(e)
    }
}

fn median_of(mut values: Vec<u64>) -> u64 {
    values.sort_unstable();
    values[values.len() / 2]
}

/// Times the pipeline on seeded random instances for every (delta, n)
/// cell. Instance seeds are drawn from one stream seeded with `seed`, in
/// cell-then-rep order, so a grid is reproducible end to end.
pub fn scaling_run(
    deltas: &[usize],
    sizes: &[usize],
    reps: usize,
    seed: Seed,
) -> Result<Vec<BenchRow>, BenchError> {
    if reps < 3 {
        return Err(BenchError::TooFewReps { reps });
    }
    for &delta in deltas {
        let bound =
            threshold(delta, false).map_err(|_| BenchError::BelowThreshold { delta, n: 0 })?;
        for &n in sizes {
            if !bound.exceeded_by(n) {
                return Err(BenchError::BelowThreshold { delta, n });
            }
        }
    }

    let mut rng = SplitMix64::new(seed);
    let mut rows = Vec::with_capacity(deltas.len() * sizes.len());
    for &delta in deltas {
        for &n in sizes {
            let mut times = Vec::with_capacity(reps);
            let mut edge_counts = Vec::with_capacity(reps);
            let mut matching_size = usize::MAX;
            for _ in 0..reps {
                let instance = random_properly_colored(n, delta, Seed(rng.next_u64()))?;
                edge_counts.push(instance.edge_count() as u64);
                let start = Instant::now();
                let report = find_rainbow_matching(&instance, false)?;
                times.push(start.elapsed().as_nanos() as u64);
                matching_size = matching_size.min(report.matching.len());
            }
            rows.push(BenchRow {
                delta,
                n,
                m: median_of(edge_counts) as usize,
                reps,
                median: Duration::from_nanos(median_of(times)),
                matching_size,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoublingRatio {
    pub delta: usize,
    pub n_from: usize,
    pub n_to: usize,
    pub ratio: f64,
    pub pass: bool,
}

/// Median-time ratios for consecutive same-delta rows where n doubles.
pub fn doubling_ratios(rows: &[BenchRow]) -> Vec<DoublingRatio> {
    rows.windows(2)
        .filter(|pair| pair[0].delta == pair[1].delta && pair[1].n == 2 * pair[0].n)
        .map(|pair| {
            let from_ns = (pair[0].median.as_nanos() as f64).max(1.0);
            let ratio = pair[1].median.as_nanos() as f64 / from_ns;
            DoublingRatio {
                delta: pair[0].delta,
                n_from: pair[0].n,
                n_to: pair[1].n,
                ratio,
                pass: ratio <= DOUBLING_RATIO_SOFT_CAP,
            }
        })
        .collect()
}

/// CSV with the fixed header `delta,n,m,reps,median_ns,matching_size`.
pub fn write_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("delta,n,m,reps,median_ns,matching_size\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.delta,
            row.n,
            row.m,
            row.reps,
            row.median.as_nanos(),
            row.matching_size
        ));
    }
    out
}
