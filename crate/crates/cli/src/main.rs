//! Command-line surface for the rainbow matching pipeline.
//!
//! Subcommands: `find` runs the full pipeline on an edge-list file,
//! `verify` checks a matching certificate against a graph, `oracle` runs
//! the exact solver on small instances, `gen` writes deterministic
//! instances, and `bench` measures pipeline scaling.
//!
//! Exit codes: 0 success, 1 input error, 2 internal guarantee violation
//! (a missed guarantee or a failed trace check — either means a bug).

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rainbow_core::bench::{doubling_ratios, scaling_run, write_csv};
use rainbow_core::generators::{
    complete_bipartite_colored, cyclic_latin, latin_to_bipartite, random_bipartite_colored,
    random_properly_colored, shuffled_latin,
};
use rainbow_core::graph::{ColoredGraph, Edge, Matching};
use rainbow_core::greedy::check_trace;
use rainbow_core::io::{format_edge_list, format_latin, parse_edge_list};
use rainbow_core::oracle::{has_rainbow_matching_of_size, max_rainbow_matching, DEFAULT_EDGE_CAP};
use rainbow_core::reduce::ReductionKind;
use rainbow_core::{find_rainbow_matching, ColorId, Seed, VertexId};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EXIT_INPUT: u8 = 1;
const EXIT_GUARANTEE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "rainbow",
    version,
    about = "Rainbow matchings in properly edge-colored graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a rainbow matching of size equal to the minimum degree.
    Find(FindArgs),
    /// Verify that a matching file is a rainbow matching of a graph file.
    Verify { graph: PathBuf, matching: PathBuf },
    /// Exact maximum rainbow matching on a small instance.
    Oracle(OracleArgs),
    /// Generate instances deterministically.
    Gen(GenArgs),
    /// Time the pipeline over a (delta, n) grid and emit CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct FindArgs {
    /// Edge-list file: `u v c` per line, `#` comments allowed.
    input: PathBuf,
    /// Emit the full JSON run report instead of matching lines.
    #[arg(long)]
    json: bool,
    /// Use the tighter triangle-free rule and threshold when the graph
    /// really is triangle-free.
    #[arg(long)]
    triangle_free: bool,
    /// Skip the greedy-trace bound checks.
    #[arg(long)]
    no_trace_check: bool,
}

#[derive(Args)]
struct OracleArgs {
    input: PathBuf,
    /// Decide "is there a rainbow matching of size k" instead of maximizing.
    #[arg(long)]
    k: Option<usize>,
    /// Edge cap guarding against oversized searches.
    #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
    cap: usize,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
}

#[derive(Subcommand)]
enum GenKind {
    /// Cyclic Latin square of order n (as a bipartite edge list).
    LatinCyclic {
        n: usize,
        /// Write the Latin-square text format instead of an edge list.
        #[arg(long)]
        square: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded row/column/symbol shuffle of the cyclic square of order n.
    LatinShuffled {
        n: usize,
        #[arg(long)]
        square: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random properly colored graph with n vertices and min degree delta.
    Random {
        n: usize,
        delta: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random properly colored bipartite graph (sides na, nb).
    Bipartite {
        na: usize,
        nb: usize,
        delta: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete bipartite K_{a,b} with the round-robin coloring.
    Kab {
        a: usize,
        b: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// Minimum degrees to benchmark.
    #[arg(long, value_delimiter = ',', required = true)]
    deltas: Vec<usize>,
    /// Instance orders; each must exceed the guarantee threshold.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    csv_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunReport {
    n: usize,
    m: usize,
    delta: usize,
    #[serde(rename = "Delta")]
    max_degree: usize,
    triangle_free: bool,
    threshold: String,
    guarantee_met: bool,
    matching: Vec<[u32; 3]>,
    reduction_steps: Vec<StepReport>,
    trace_summary: TraceSummary,
    elapsed_ns: u64,
}

#[derive(Serialize)]
struct StepReport {
    kind: String,
    removed: usize,
    trimmed: usize,
}

#[derive(Serialize)]
struct TraceSummary {
    k: usize,
    h: usize,
    violations: Vec<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };

    match cli.command {
        Command::Find(args) => cmd_find(args),
        Command::Verify { graph, matching } => cmd_verify(&graph, &matching),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Gen(args) => cmd_gen(args.kind),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn input_error(what: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {what}");
    ExitCode::from(EXIT_INPUT)
}

fn load_graph(path: &Path) -> Result<ColoredGraph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let edges = parse_edge_list(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    ColoredGraph::build(&edges).map_err(|e| format!("{}: {e}", path.display()))
}

fn sorted_by_color(matching: &Matching) -> Vec<Edge> {
    let mut edges = matching.edges.clone();
    edges.sort_by_key(|e| (e.color, e.u, e.v));
    edges
}

fn cmd_find(args: FindArgs) -> ExitCode {
    let graph = match load_graph(&args.input) {
        Ok(g) => g,
        Err(e) => return input_error(e),
    };
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let delta = graph.min_degree();
    let max_degree = graph.max_degree();
    let triangle_free = graph.is_triangle_free();

    let start = Instant::now();
    let report = match find_rainbow_matching(&graph, args.triangle_free) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("internal error: {e}");
            return ExitCode::from(EXIT_GUARANTEE);
        }
    };
    let elapsed_ns = start.elapsed().as_nanos() as u64;

    let violations = if args.no_trace_check {
        Vec::new()
    } else {
        check_trace(&report.trace, report.chain_summary.core_edge_count)
    };

    let expected = delta == 0 || report.threshold_value.exceeded_by(n);
    let achieved = report.matching.len() == delta;

    if args.json {
        let run = RunReport {
            n,
            m,
            delta,
            max_degree,
            triangle_free,
            threshold: report.threshold_value.to_string(),
            guarantee_met: report.guarantee_met,
            matching: sorted_by_color(&report.matching)
                .iter()
                .map(|e| [e.u.0, e.v.0, e.color.0])
                .collect(),
            reduction_steps: report
                .chain_summary
                .steps
                .iter()
                .map(|s| StepReport {
                    kind: match s.kind {
                        ReductionKind::VertexRemoval(_) => "vertex_removal".into(),
                        ReductionKind::ColorClassRemoval(_) => "color_class_removal".into(),
                    },
                    removed: s.removed,
                    trimmed: s.trimmed,
                })
                .collect(),
            trace_summary: TraceSummary {
                k: report.trace.matching_size(),
                h: report.trace.last_unmatched_color_step,
                violations: violations.iter().map(|v| v.to_string()).collect(),
            },
            elapsed_ns,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&run).expect("report serializes")
        );
    } else {
        for e in sorted_by_color(&report.matching) {
            println!("{} {} {}", e.u, e.v, e.color);
        }
    }

    if !violations.is_empty() {
        for v in &violations {
            eprintln!("trace violation: {v}");
        }
        return ExitCode::from(EXIT_GUARANTEE);
    }
    let matching_faults = graph.matching_violations(&report.matching);
    if !matching_faults.is_empty() {
        for fault in &matching_faults {
            eprintln!("internal error: {fault}");
        }
        return ExitCode::from(EXIT_GUARANTEE);
    }
    if expected && !achieved {
        eprintln!(
            "guarantee violation: order {n} exceeds threshold {} but matching has {} of {} edges",
            report.threshold_value,
            report.matching.len(),
            delta
        );
        return ExitCode::from(EXIT_GUARANTEE);
    }
    ExitCode::SUCCESS
}

fn cmd_verify(graph_path: &Path, matching_path: &Path) -> ExitCode {
    let graph = match load_graph(graph_path) {
        Ok(g) => g,
        Err(e) => return input_error(e),
    };
    let text = match std::fs::read_to_string(matching_path) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", matching_path.display())),
    };
    let triples = match parse_edge_list(&text) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", matching_path.display())),
    };
    let matching = Matching::new(
        triples
            .iter()
            .map(|&(u, v, c)| Edge::new(VertexId(u), VertexId(v), ColorId(c)))
            .collect(),
    );
    let violations = graph.matching_violations(&matching);
    if violations.is_empty() {
        println!("ok: rainbow matching of size {}", matching.len());
        ExitCode::SUCCESS
    } else {
        for v in &violations {
            eprintln!("invalid: {v}");
        }
        ExitCode::from(EXIT_INPUT)
    }
}

fn cmd_oracle(args: OracleArgs) -> ExitCode {
    let graph = match load_graph(&args.input) {
        Ok(g) => g,
        Err(e) => return input_error(e),
    };
    match args.k {
        Some(k) => match has_rainbow_matching_of_size(&graph, k, args.cap) {
            Ok(answer) => {
                println!("{}", if answer { "yes" } else { "no" });
                ExitCode::SUCCESS
            }
            Err(e) => input_error(e),
        },
        None => match max_rainbow_matching(&graph, args.cap) {
            Ok(result) => {
                println!("max {}", result.max_size);
                for e in sorted_by_color(&result.witness) {
                    println!("{} {} {}", e.u, e.v, e.color);
                }
                ExitCode::SUCCESS
            }
            Err(e) => input_error(e),
        },
    }
}

fn emit(out: Option<&Path>, content: &str) -> ExitCode {
    match out {
        Some(path) => match std::fs::write(path, content) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => input_error(format!("{}: {e}", path.display())),
        },
        None => {
            print!("{content}");
            ExitCode::SUCCESS
        }
    }
}

fn cmd_gen(kind: GenKind) -> ExitCode {
    match kind {
        GenKind::LatinCyclic { n, square, out } => match cyclic_latin(n) {
            Ok(latin) => {
                let content = if square {
                    format_latin(&latin)
                } else {
                    format_edge_list(&latin_to_bipartite(&latin))
                };
                emit(out.as_deref(), &content)
            }
            Err(e) => input_error(e),
        },
        GenKind::LatinShuffled {
            n,
            square,
            seed,
            out,
        } => match cyclic_latin(n) {
            Ok(base) => {
                let latin = shuffled_latin(&base, Seed(seed));
                let content = if square {
                    format_latin(&latin)
                } else {
                    format_edge_list(&latin_to_bipartite(&latin))
                };
                emit(out.as_deref(), &content)
            }
            Err(e) => input_error(e),
        },
        GenKind::Random {
            n,
            delta,
            seed,
            out,
        } => match random_properly_colored(n, delta, Seed(seed)) {
            Ok(g) => emit(out.as_deref(), &format_edge_list(&g)),
            Err(e) => input_error(e),
        },
        GenKind::Bipartite {
            na,
            nb,
            delta,
            seed,
            out,
        } => match random_bipartite_colored(na, nb, delta, Seed(seed)) {
            Ok(g) => emit(out.as_deref(), &format_edge_list(&g)),
            Err(e) => input_error(e),
        },
        GenKind::Kab { a, b, out } => match complete_bipartite_colored(a, b) {
            Ok(g) => emit(out.as_deref(), &format_edge_list(&g)),
            Err(e) => input_error(e),
        },
    }
}

fn cmd_bench(args: BenchArgs) -> ExitCode {
    if args.deltas.is_empty() || args.sizes.is_empty() {
        return input_error("bench needs at least one delta and one size");
    }
    let rows = match scaling_run(&args.deltas, &args.sizes, args.reps, Seed(args.seed)) {
        Ok(rows) => rows,
        Err(e) => return input_error(e),
    };
    let csv = write_csv(&rows);
    match args.csv_out.as_deref() {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &csv) {
                return input_error(format!("{}: {e}", path.display()));
            }
        }
        None => print!("{csv}"),
    }
    for ratio in doubling_ratios(&rows) {
        println!(
            "delta {}: median({}) / median({}) = {:.2} [{}]",
            ratio.delta,
            ratio.n_to,
            ratio.n_from,
            ratio.ratio,
            if ratio.pass { "PASS" } else { "WARN" }
        );
    }
    ExitCode::SUCCESS
}
