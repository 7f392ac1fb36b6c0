//! Graph statistics: cherries, triangles, clustering, cliques and degrees.
//!
//! Everything except the multidegree quantities is computed on the simple
//! view, where loops are dropped and parallel edges collapse.

mod clique;
mod record;
mod trajectory;
mod triangles;

use crate::error::Result;
use crate::growth::{GrowthGraph, VertexId};
use crate::par::Execution;
use crate::simple::SimpleGraph;

pub use clique::{clique_greedy_in, max_clique, CliqueResult, DEFAULT_CLIQUE_BUDGET, DEFAULT_CLIQUE_POOL};
pub use record::{measure, MeasureOptions, ObservableRecord, CSV_HEADER};
pub use trajectory::{normalized_degree_trajectory, DegreeTrajectory};
pub use triangles::count_triangles_in;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CherryMode {
    /// Pairs of distinct neighbors: `sum_v C(|N(v)|, 2)`.
    Simple,
    /// Pairs of edge slots: `sum_v C(deg(v), 2)` with loops counted twice.
    Multi,
}

#[inline]
fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// `Gamma_t(j)`: number of distinct neighbors of `j`, itself excluded.
pub fn distinct_neighbors(graph: &GrowthGraph, j: VertexId) -> Result<usize> {
    match graph.neighbors(j)? {
        Some(list) => Ok(list.len()),
        None => Ok(graph.simple_view().degree(j.index())),
    }
}

pub fn cherries(graph: &GrowthGraph, mode: CherryMode) -> u64 {
    match mode {
        CherryMode::Simple => {
            if graph.tracks_neighbors() {
                (1..=graph.n_vertices() as u32)
                    .map(|v| {
                        let list = graph.neighbors(VertexId(v)).ok().flatten().unwrap_or(&[]);
                        choose2(list.len() as u64)
                    })
                    .sum()
            } else {
                simple_cherries(&graph.simple_view())
            }
        }
        CherryMode::Multi => graph.degrees().iter().map(|&d| choose2(d.into())).sum(),
    }
}

pub fn simple_cherries(graph: &SimpleGraph) -> u64 {
    (0..graph.n()).map(|v| choose2(graph.degree(v) as u64)).sum()
}

/// Triangles of the simple view, i.e. counted without multiplicity.
pub fn count_triangles(graph: &GrowthGraph) -> u64 {
    count_triangles_in(&graph.simple_view(), Execution::Parallel)
}

/// `3 * triangles / cherries`, `None` when the graph has no cherry.
pub fn clustering_from_counts(triangles: u64, cherries_simple: u64) -> Option<f64> {
    (cherries_simple > 0).then(|| 3.0 * triangles as f64 / cherries_simple as f64)
}

/// Global clustering coefficient; `None` is the undefined value.
pub fn global_clustering(graph: &GrowthGraph) -> Option<f64> {
    let simple = graph.simple_view();
    clustering_from_counts(
        count_triangles_in(&simple, Execution::Parallel),
        simple_cherries(&simple),
    )
}

/// Exact clique number of the simple view, within a node-expansion budget.
pub fn clique_exact(graph: &GrowthGraph, budget: u64) -> CliqueResult {
    max_clique(&graph.simple_view(), budget)
}

/// Lower bound on the clique number from the `k` highest-multidegree vertices.
pub fn clique_greedy(graph: &GrowthGraph, k: usize) -> CliqueResult {
    clique_greedy_in(&graph.simple_view(), graph.degrees(), k, DEFAULT_CLIQUE_BUDGET)
}

/// Vertex of largest multidegree, the earliest-born on ties.
pub fn max_degree(graph: &GrowthGraph) -> (VertexId, u32) {
    let (index, degree) = graph
        .degrees()
        .iter()
        .enumerate()
        .fold((0, 0), |best, (i, &d)| if d > best.1 { (i, d) } else { best });
    (VertexId::from_index(index), degree)
}

/// `histogram[d]` is the number of vertices of multidegree `d`.
pub fn degree_histogram(graph: &GrowthGraph) -> Vec<u64> {
    let max = max_degree(graph).1 as usize;
    let mut histogram = vec![0; max + 1];
    for &d in graph.degrees() {
        histogram[d as usize] += 1;
    }
    histogram
}
