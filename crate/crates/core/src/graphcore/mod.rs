//! Dense graphs, G(n, 1/2) sampling and exact solvers.

mod clique;
mod color;
mod graph;
mod io;
mod kset;
mod sample;

pub use clique::{independence_number, max_clique, max_independent_set, CliqueResult};
pub use color::{chromatic_number, chromatic_number_with, is_proper_coloring, ChromaticResult, SolveBudget, StopReason};
pub use graph::{Graph, GraphSummary, MAX_VERTICES};
pub use io::MAGIC;
pub use kset::{all_disjoint, count_independent_ksets, count_with_limit, IndependentSetReport};
pub use sample::{edge_bit, edge_index, sample_gnp_half};
