//! Rainbow matchings in properly edge-colored graphs.
//!
//! A rainbow matching is a set of pairwise vertex-disjoint edges with
//! pairwise distinct colors. This crate constructs one of size equal to
//! the graph's minimum degree whenever the graph has enough vertices
//! (see [`greedy::threshold`]), by reducing the graph to a bounded core
//! ([`mod@reduce`]), running a smallest-class greedy matcher on the core
//! ([`greedy`]), and extending the result back through the reduction.
//! An exact branch-and-bound [`oracle`] serves as ground truth on small
//! instances, [`generators`] builds Latin squares and seeded random
//! instances, and [`mod@bench`] measures how the pipeline scales.

pub mod bench;
pub mod generators;
pub mod graph;
pub mod greedy;
pub mod io;
pub mod oracle;
pub mod reduce;
pub mod rng;

pub use graph::{ColorId, ColoredGraph, Edge, GraphError, Matching, VertexId};
pub use greedy::{check_trace, find_rainbow_matching, greedy_matching, threshold, PipelineReport};
pub use reduce::{extend, extend_through_chain, reduce, trim, ReductionChain};
pub use rng::Seed;
