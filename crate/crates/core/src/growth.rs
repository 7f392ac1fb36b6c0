//! The edge-step preferential attachment process.
//!
//! Starting from one vertex carrying one loop, every step adds exactly one
//! edge. With probability `p` a new vertex is attached to a preferentially
//! chosen target (vertex-step); otherwise two independently, preferentially
//! chosen tips are joined (edge-step), loops and parallel edges allowed.
//!
//! Preferential choice is an index into the endpoint list: a vertex of
//! multidegree `d` occupies exactly `d` of its `2t` slots, so a uniform slot
//! is an exact draw from `degree / 2t` in O(1).
//!
//! Randomness per step, in order: one uniform deciding the step type
//! (vertex-step iff `u < p`), then one uniform per preferential sample
//! (the target, or the tips `u` then `w`).

use std::fmt;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};
use crate::simple::SimpleGraph;

/// Largest supported horizon; vertex ids and degrees are stored as `u32`.
pub const MAX_HORIZON: u64 = (u32::MAX / 2) as u64;

/// A vertex label. Ids are dense and 1-based in birth order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub const FIRST: VertexId = VertexId(1);

    /// Zero-based position in per-vertex arrays.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub fn from_index(index: usize) -> Self {
        VertexId(index as u32 + 1)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Everything that fixes the law and the realization of one trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Probability of a vertex-step.
    pub p: f64,
    /// Horizon: the trajectory stops once the graph has `t_max` edges.
    pub t_max: u64,
    pub seed: u64,
}

impl ModelParams {
    pub fn new(p: f64, t_max: u64, seed: u64) -> Result<Self> {
        let params = ModelParams { p, t_max, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParams(format!("p = {} is outside [0, 1]", self.p)));
        }
        if self.t_max == 0 {
            return Err(Error::InvalidParams("t_max must be at least 1".into()));
        }
        if self.t_max > MAX_HORIZON {
            return Err(Error::InvalidParams(format!(
                "t_max = {} exceeds the supported maximum {MAX_HORIZON}",
                self.t_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Vertex,
    Edge,
}

/// One step of a trajectory after `G_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRecord {
    /// A new vertex attached to `target`.
    Vertex { target: VertexId },
    /// An edge between the two tips; `u == w` is a loop.
    Edge { u: VertexId, w: VertexId },
}

impl StepRecord {
    pub fn kind(&self) -> StepKind {
        match self {
            StepRecord::Vertex { .. } => StepKind::Vertex,
            StepRecord::Edge { .. } => StepKind::Edge,
        }
    }
}

/// Replayable record of a trajectory: the parameters plus steps `2..=t`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepLog {
    pub params: ModelParams,
    pub records: Vec<StepRecord>,
}

impl StepLog {
    pub fn new(params: ModelParams) -> Self {
        StepLog {
            params,
            records: Vec::new(),
        }
    }

    /// Number of edges of the graph this log describes.
    pub fn horizon(&self) -> u64 {
        self.records.len() as u64 + 1
    }

    /// Rebuilds the graph from `G_1`, validating every referenced vertex.
    pub fn replay(&self) -> Result<GrowthGraph> {
        let mut graph = GrowthGraph::new();
        for record in &self.records {
            graph.apply(*record)?;
        }
        Ok(graph)
    }

    /// Recovers the log of a graph from its endpoint list and birth steps.
    pub fn from_graph(graph: &GrowthGraph, params: ModelParams) -> Self {
        let records = (2..=graph.t())
            .map(|s| {
                let slot = 2 * (s as usize - 1);
                let (a, b) = (graph.endpoints[slot], graph.endpoints[slot + 1]);
                if graph.birth_step[b as usize - 1] == s {
                    StepRecord::Vertex {
                        target: VertexId(a),
                    }
                } else {
                    StepRecord::Edge {
                        u: VertexId(a),
                        w: VertexId(b),
                    }
                }
            })
            .collect();
        StepLog { params, records }
    }
}

/// Distinct-neighbor index of the simple view (loops and multiplicities dropped).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct SimpleAdjacency {
    lists: Vec<Vec<u32>>,
    pairs: FxHashSet<u64>,
}

impl SimpleAdjacency {
    #[inline]
    fn key(a: u32, b: u32) -> u64 {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        (u64::from(lo) << 32) | u64::from(hi)
    }

    fn add_vertex(&mut self) {
        self.lists.push(Vec::new());
    }

    /// `a` and `b` are 1-based ids.
    #[inline]
    fn add_edge(&mut self, a: u32, b: u32) {
        if a != b && self.pairs.insert(Self::key(a, b)) {
            self.lists[a as usize - 1].push(b);
            self.lists[b as usize - 1].push(a);
        }
    }
}

/// The evolving multigraph `G_t`.
///
/// Holds exactly `t` edges as `2t` endpoints in insertion order; a
/// vertex-step stores `[target, new vertex]`. Loops count twice toward the
/// multidegree. Once built, a graph is only read, and it is `Sync`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthGraph {
    endpoints: Vec<u32>,
    degree: Vec<u32>,
    birth_step: Vec<u64>,
    adjacency: Option<SimpleAdjacency>,
}

impl Default for GrowthGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl GrowthGraph {
    /// `G_1`: one vertex with one loop, with the distinct-neighbor index kept.
    pub fn new() -> Self {
        let mut adjacency = SimpleAdjacency::default();
        adjacency.add_vertex();
        GrowthGraph {
            endpoints: vec![1, 1],
            degree: vec![2],
            birth_step: vec![1],
            adjacency: Some(adjacency),
        }
    }

    /// `G_1` without the distinct-neighbor index, for runs that only need
    /// degrees (martingale and tail diagnostics). The simple view is then
    /// rebuilt from the endpoint list on demand.
    pub fn lean() -> Self {
        GrowthGraph {
            adjacency: None,
            ..Self::new()
        }
    }

    pub fn with_capacity(t_max: u64, tracked: bool) -> Self {
        let mut graph = if tracked { Self::new() } else { Self::lean() };
        graph.endpoints.reserve(2 * t_max as usize);
        if let Some(adj) = graph.adjacency.as_mut() {
            adj.pairs.reserve(t_max as usize);
        }
        graph
    }

    /// Current step count, equal to the number of edges.
    #[inline]
    pub fn t(&self) -> u64 {
        self.endpoints.len() as u64 / 2
    }

    #[inline]
    pub fn n_vertices(&self) -> usize {
        self.degree.len()
    }

    pub fn endpoints(&self) -> &[u32] {
        &self.endpoints
    }

    /// Multidegrees indexed by `VertexId::index`.
    pub fn degrees(&self) -> &[u32] {
        &self.degree
    }

    pub fn birth_steps(&self) -> &[u64] {
        &self.birth_step
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.0 >= 1 && (v.0 as usize) <= self.degree.len()
    }

    pub fn degree(&self, v: VertexId) -> Result<u32> {
        self.check(v)?;
        Ok(self.degree[v.index()])
    }

    pub fn birth_step(&self, v: VertexId) -> Result<u64> {
        self.check(v)?;
        Ok(self.birth_step[v.index()])
    }

    pub fn tracks_neighbors(&self) -> bool {
        self.adjacency.is_some()
    }

    /// Distinct neighbors of `v` in the simple view, in order of first contact.
    /// `None` for a lean graph.
    pub fn neighbors(&self, v: VertexId) -> Result<Option<&[u32]>> {
        self.check(v)?;
        Ok(self
            .adjacency
            .as_ref()
            .map(|adj| adj.lists[v.index()].as_slice()))
    }

    /// Simple-graph view in CSR form, with 0-based vertex indices.
    pub fn simple_view(&self) -> SimpleGraph {
        match &self.adjacency {
            Some(adj) => SimpleGraph::from_lists(
                adj.lists
                    .iter()
                    .map(|l| l.iter().map(|&v| v - 1).collect::<Vec<_>>()),
            ),
            None => SimpleGraph::from_edges(
                self.n_vertices(),
                self.endpoints
                    .chunks_exact(2)
                    .map(|e| (e[0] as usize - 1, e[1] as usize - 1)),
            ),
        }
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.0))
        }
    }

    /// Preferential draw: the vertex at slot `floor(u * 2t)` of the endpoint list.
    pub fn sample_preferential(&self, u: f64) -> Result<VertexId> {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::UniformOutOfRange(u));
        }
        Ok(VertexId(self.pick(u)))
    }

    #[inline]
    fn pick(&self, u: f64) -> u32 {
        let len = self.endpoints.len();
        // u * len can round up to len for u within 2^-53 of 1.
        let slot = ((u * len as f64) as usize).min(len - 1);
        self.endpoints[slot]
    }

    fn push_vertex(&mut self, target: u32) -> u32 {
        let new = self.degree.len() as u32 + 1;
        let step = self.t() + 1;
        self.endpoints.push(target);
        self.endpoints.push(new);
        self.degree[target as usize - 1] += 1;
        self.degree.push(1);
        self.birth_step.push(step);
        if let Some(adj) = self.adjacency.as_mut() {
            adj.add_vertex();
            adj.add_edge(target, new);
        }
        new
    }

    fn push_edge(&mut self, u: u32, w: u32) {
        self.endpoints.push(u);
        self.endpoints.push(w);
        self.degree[u as usize - 1] += 1;
        self.degree[w as usize - 1] += 1;
        if let Some(adj) = self.adjacency.as_mut() {
            adj.add_edge(u, w);
        }
    }

    /// Applies a recorded step, rejecting references to vertices not yet born.
    pub fn apply(&mut self, record: StepRecord) -> Result<()> {
        let alive = self.degree.len() as u32;
        let step = self.t() + 1;
        let check = |v: VertexId| {
            if v.0 >= 1 && v.0 <= alive {
                Ok(())
            } else {
                Err(Error::VertexNotAlive {
                    vertex: v.0,
                    step,
                    alive,
                })
            }
        };
        match record {
            StepRecord::Vertex { target } => {
                check(target)?;
                self.push_vertex(target.0);
            }
            StepRecord::Edge { u, w } => {
                check(u)?;
                check(w)?;
                self.push_edge(u.0, w.0);
            }
        }
        Ok(())
    }
}

/// The `G_1` every trajectory starts from.
pub fn init_graph(params: &ModelParams) -> Result<GrowthGraph> {
    params.validate()?;
    Ok(GrowthGraph::with_capacity(params.t_max, true))
}

/// Performs one step of the given type, drawing its preferential samples
/// from `rng`. Both edge-step tips are drawn from the pre-step graph.
pub fn perform_step(graph: &mut GrowthGraph, is_vertex_step: bool, rng: &mut StreamRng) -> StepRecord {
    if is_vertex_step {
        let target = graph.pick(rng::uniform(rng));
        graph.push_vertex(target);
        StepRecord::Vertex {
            target: VertexId(target),
        }
    } else {
        let u = graph.pick(rng::uniform(rng));
        let w = graph.pick(rng::uniform(rng));
        graph.push_edge(u, w);
        StepRecord::Edge {
            u: VertexId(u),
            w: VertexId(w),
        }
    }
}

/// A trajectory in progress: graph, random stream and optional log.
#[derive(Debug, Clone)]
pub struct Trajectory {
    graph: GrowthGraph,
    rng: StreamRng,
    p: f64,
    log: Option<Vec<StepRecord>>,
}

impl Trajectory {
    /// Starts at `G_1` with the distinct-neighbor index and a step log.
    pub fn new(params: &ModelParams) -> Result<Self> {
        let graph = init_graph(params)?;
        Ok(Self::resume(graph, params.p, params.seed, true))
    }

    /// Starts at `G_1` keeping only endpoints and degrees, with no log.
    pub fn lean(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let graph = GrowthGraph::with_capacity(params.t_max, false);
        Ok(Self::resume(graph, params.p, params.seed, false))
    }

    /// Continues from an existing graph with a fresh stream.
    pub fn resume(graph: GrowthGraph, p: f64, seed: u64, record: bool) -> Self {
        Trajectory {
            graph,
            rng: rng::stream(seed),
            p,
            log: record.then(Vec::new),
        }
    }

    pub fn graph(&self) -> &GrowthGraph {
        &self.graph
    }

    #[inline]
    pub fn step(&mut self) -> StepRecord {
        let is_vertex_step = rng::uniform(&mut self.rng) < self.p;
        let record = perform_step(&mut self.graph, is_vertex_step, &mut self.rng);
        if let Some(log) = self.log.as_mut() {
            log.push(record);
        }
        record
    }

    /// Steps until the graph has `t` edges (no-op if already there).
    pub fn run_to(&mut self, t: u64) {
        while self.graph.t() < t {
            self.step();
        }
    }

    pub fn records(&self) -> &[StepRecord] {
        self.log.as_deref().unwrap_or(&[])
    }

    pub fn into_parts(self) -> (GrowthGraph, Vec<StepRecord>) {
        (self.graph, self.log.unwrap_or_default())
    }
}

/// Runs a full trajectory to `params.t_max`.
pub fn generate(params: &ModelParams) -> Result<(GrowthGraph, StepLog)> {
    let mut trajectory = Trajectory::new(params)?;
    trajectory.run_to(params.t_max);
    let (graph, records) = trajectory.into_parts();
    Ok((
        graph,
        StepLog {
            params: *params,
            records,
        },
    ))
}
