use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{clique, clustering_from_counts, count_triangles_in, simple_cherries, CherryMode};
use crate::growth::{GrowthGraph, VertexId};
use crate::par::Execution;

pub const CSV_HEADER: &str = "p,seed,t,n_vertices,n_edges,max_degree,cherries_simple,cherries_multi,triangles,tau,clique_lb,clique_exact,gamma_t_1,wall_millis";

/// One row of measurements of one graph. Optional fields are empty in CSV
/// when undefined (`tau` without cherries) or not computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub p: f64,
    pub seed: u64,
    pub t: u64,
    pub n_vertices: u64,
    pub n_edges: u64,
    pub max_degree: u64,
    pub cherries_simple: u64,
    pub cherries_multi: u64,
    pub triangles: Option<u64>,
    pub tau: Option<f64>,
    pub clique_lb: Option<u64>,
    pub clique_exact: Option<u64>,
    pub gamma_t_1: u64,
    pub wall_millis: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureOptions {
    pub triangles: bool,
    /// Candidate pool for the clique lower bound; `None` skips it.
    pub clique_pool: Option<usize>,
    pub exact_clique: bool,
    pub clique_budget: u64,
    pub exec: Execution,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            triangles: true,
            clique_pool: Some(clique::DEFAULT_CLIQUE_POOL),
            exact_clique: false,
            clique_budget: clique::DEFAULT_CLIQUE_BUDGET,
            exec: Execution::Parallel,
        }
    }
}

/// Measures `graph`; `wall_millis` is the time spent measuring.
pub fn measure(graph: &GrowthGraph, p: f64, seed: u64, options: &MeasureOptions) -> ObservableRecord {
    let start = Instant::now();
    let simple = graph.simple_view();
    let cherries_simple = simple_cherries(&simple);
    let triangles = options
        .triangles
        .then(|| count_triangles_in(&simple, options.exec));
    let tau = triangles.and_then(|tri| clustering_from_counts(tri, cherries_simple));
    let clique_lb = options.clique_pool.map(|k| {
        clique::clique_greedy_in(&simple, graph.degrees(), k, options.clique_budget).size as u64
    });
    let clique_exact = if options.exact_clique {
        let result = clique::max_clique(&simple, options.clique_budget);
        result.exact.then_some(result.size as u64)
    } else {
        None
    };
    ObservableRecord {
        p,
        seed,
        t: graph.t(),
        n_vertices: graph.n_vertices() as u64,
        n_edges: graph.t(),
        max_degree: super::max_degree(graph).1.into(),
        cherries_simple,
        cherries_multi: super::cherries(graph, CherryMode::Multi),
        triangles,
        tau,
        clique_lb,
        clique_exact,
        gamma_t_1: simple.degree(VertexId::FIRST.index()) as u64,
        wall_millis: start.elapsed().as_millis() as u64,
    }
}
