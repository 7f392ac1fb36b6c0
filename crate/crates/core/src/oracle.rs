//! Exact law of the process for tiny horizons.
//!
//! Every trajectory up to horizon `t <= ENUMERATION_CAP` is expanded depth
//! first. From a graph with `s` edges, a vertex-step to `u` has probability
//! `p * d(u) / 2s`, and an edge-step on the unordered pair `{u, w}` has
//! probability `(1 - p) * m * d(u) d(w) / 4s^2` with `m = 1` for a loop and
//! `m = 2` otherwise (the two ordered draws give the same multigraph).
//!
//! Path weights are kept as integers over the common denominator
//! `L = prod_{s<t} 4s^2`, split by the number `k` of vertex-steps, so the
//! probability of a path is `p^k (1-p)^{t-1-k} w / L`. All arithmetic is
//! exact; rationals only appear when the `k`-sums are combined with `p`.
//!
//! Outcomes are labelled graphs (no isomorphism merging) visited in a
//! canonical order: vertex-steps by target id, then edge-steps by `(u, w)`
//! with `u <= w`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::growth::{GrowthGraph, ModelParams, StepLog, StepRecord, VertexId};
use crate::par::{self, Execution};

/// Largest horizon the enumeration accepts (about 1.9e7 outcomes at t = 9).
pub const ENUMERATION_CAP: u64 = 9;

const SLOTS: usize = ENUMERATION_CAP as usize + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    /// `N(t)`, the number of vertices.
    Vertices,
    /// `d_t(1)`, the multidegree of the first vertex.
    DegreeVertex1,
    Triangles,
    CherriesSimple,
    CherriesMulti,
    /// `omega(G_t)`.
    CliqueNumber,
    /// `Gamma_t(1)`, distinct neighbors of the first vertex.
    NeighborsVertex1,
}

impl Statistic {
    pub const ALL: [Statistic; 7] = [
        Statistic::Vertices,
        Statistic::DegreeVertex1,
        Statistic::Triangles,
        Statistic::CherriesSimple,
        Statistic::CherriesMulti,
        Statistic::CliqueNumber,
        Statistic::NeighborsVertex1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Vertices => "N",
            Statistic::DegreeVertex1 => "d_t(1)",
            Statistic::Triangles => "triangles",
            Statistic::CherriesSimple => "cherries_simple",
            Statistic::CherriesMulti => "cherries_multi",
            Statistic::CliqueNumber => "clique",
            Statistic::NeighborsVertex1 => "gamma_t_1",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "N" | "n" | "vertices" | "n_vertices" => Statistic::Vertices,
            "d_t(1)" | "d1" | "degree1" => Statistic::DegreeVertex1,
            "T" | "triangles" => Statistic::Triangles,
            "C" | "cherries" | "cherries_simple" => Statistic::CherriesSimple,
            "cherries_multi" => Statistic::CherriesMulti,
            "omega" | "clique" | "clique_number" => Statistic::CliqueNumber,
            "gamma_t_1" | "gamma1" | "Gamma_t(1)" => Statistic::NeighborsVertex1,
            other => return Err(Error::UnknownStatistic(other.to_string())),
        })
    }
}

/// Parses an exact probability written as `num/den` or as a finite decimal.
pub fn parse_probability(text: &str) -> Result<BigRational> {
    let bad = || Error::InvalidProbability(text.to_string());
    let text = text.trim();
    let value = if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        BigRational::new(num, den)
    } else {
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        BigRational::new(digits, num_traits::pow(BigInt::from(10), frac.len()))
    };
    if value < BigRational::zero() || value > BigRational::one() {
        return Err(bad());
    }
    Ok(value)
}

/// `num/den`, also for integers.
pub fn render_rational(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn rational_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `phi(t)` as an exact rational.
pub fn phi_exact(t: u64, p: &BigRational) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let c = BigRational::one() - p / two;
    (1..t).fold(BigRational::one(), |acc, s| {
        acc * (BigRational::one() + &c / BigRational::from_integer(s.into()))
    })
}

/// Minimal multigraph state for enumeration: degrees and simple adjacency bitmasks.
#[derive(Debug, Clone, Copy)]
struct TinyGraph {
    n: usize,
    edges: u64,
    degree: [u32; SLOTS],
    adjacency: [u16; SLOTS],
}

impl TinyGraph {
    fn initial() -> Self {
        let mut degree = [0; SLOTS];
        degree[0] = 2;
        TinyGraph {
            n: 1,
            edges: 1,
            degree,
            adjacency: [0; SLOTS],
        }
    }

    fn statistic(&self, stat: Statistic) -> u64 {
        let choose2 = |k: u64| k * k.saturating_sub(1) / 2;
        let n = self.n;
        match stat {
            Statistic::Vertices => n as u64,
            Statistic::DegreeVertex1 => self.degree[0].into(),
            Statistic::Triangles => {
                let mut count = 0;
                for a in 0..n {
                    for b in a + 1..n {
                        if self.adjacency[a] >> b & 1 == 0 {
                            continue;
                        }
                        let common = self.adjacency[a] & self.adjacency[b];
                        count += (common >> (b + 1)).count_ones() as u64;
                    }
                }
                count
            }
            Statistic::CherriesSimple => self.adjacency[..n]
                .iter()
                .map(|a| choose2(a.count_ones().into()))
                .sum(),
            Statistic::CherriesMulti => self.degree[..n].iter().map(|&d| choose2(d.into())).sum(),
            Statistic::CliqueNumber => self.clique(0, (1u16 << n) - 1) as u64,
            Statistic::NeighborsVertex1 => self.adjacency[0].count_ones().into(),
        }
    }

    /// Largest clique extending a clique of `size` by vertices of `candidates`.
    fn clique(&self, size: u32, candidates: u16) -> u32 {
        let mut best = size;
        let mut rest = candidates;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            best = best.max(self.clique(size + 1, rest & self.adjacency[v]));
        }
        best
    }
}

#[derive(Debug, Clone, Copy)]
struct Branch {
    record: StepRecord,
    factor: u128,
    next: TinyGraph,
    vertex_step: bool,
}

fn branches(g: &TinyGraph) -> Vec<Branch> {
    let s = u128::from(g.edges);
    let mut out = Vec::with_capacity(g.n + g.n * (g.n + 1) / 2);
    for u in 0..g.n {
        let mut next = *g;
        let new = g.n;
        next.n += 1;
        next.edges += 1;
        next.degree[u] += 1;
        next.degree[new] = 1;
        next.adjacency[u] |= 1 << new;
        next.adjacency[new] |= 1 << u;
        out.push(Branch {
            record: StepRecord::Vertex {
                target: VertexId::from_index(u),
            },
            factor: u128::from(g.degree[u]) * 2 * s,
            next,
            vertex_step: true,
        });
    }
    for u in 0..g.n {
        for w in u..g.n {
            let mut next = *g;
            next.edges += 1;
            next.degree[u] += 1;
            next.degree[w] += 1;
            let multiplicity = if u == w {
                1
            } else {
                next.adjacency[u] |= 1 << w;
                next.adjacency[w] |= 1 << u;
                2
            };
            out.push(Branch {
                record: StepRecord::Edge {
                    u: VertexId::from_index(u),
                    w: VertexId::from_index(w),
                },
                factor: multiplicity * u128::from(g.degree[u]) * u128::from(g.degree[w]),
                next,
                vertex_step: false,
            });
        }
    }
    out
}

/// A partially expanded path: state, vertex-step count, scaled weight, records.
#[derive(Clone)]
struct Node {
    graph: TinyGraph,
    vertex_steps: usize,
    weight: u128,
    path: Vec<StepRecord>,
}

fn expand<F: FnMut(&Node)>(node: &mut Node, horizon: u64, visit: &mut F) {
    if node.graph.edges == horizon {
        visit(node);
        return;
    }
    for branch in branches(&node.graph) {
        let saved = (node.graph, node.vertex_steps, node.weight);
        node.graph = branch.next;
        node.vertex_steps += usize::from(branch.vertex_step);
        node.weight *= branch.factor;
        node.path.push(branch.record);
        expand(node, horizon, visit);
        node.path.pop();
        (node.graph, node.vertex_steps, node.weight) = saved;
    }
}

/// Subtree roots a few steps deep, in canonical order.
fn frontier(horizon: u64) -> Vec<Node> {
    let depth = (horizon - 1).min(4);
    let mut roots = Vec::new();
    let mut root = Node {
        graph: TinyGraph::initial(),
        vertex_steps: 0,
        weight: 1,
        path: Vec::new(),
    };
    expand(&mut root, 1 + depth, &mut |node: &Node| roots.push(node.clone()));
    roots
}

fn check_horizon(t: u64) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidParams("horizon must be at least 1".into()));
    }
    if t > ENUMERATION_CAP {
        return Err(Error::HorizonTooLarge {
            t,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

fn common_denominator(t: u64) -> BigInt {
    (1..t).fold(BigInt::one(), |acc, s| acc * BigInt::from(4 * s * s))
}

/// `p^k (1-p)^{t-1-k} / L` for `k = 0..t`.
fn path_scales(t: u64, p: &BigRational) -> Vec<BigRational> {
    let q = BigRational::one() - p;
    let denominator = BigRational::from_integer(common_denominator(t));
    (0..t as usize)
        .map(|k| num_traits::pow(p.clone(), k) * num_traits::pow(q.clone(), t as usize - 1 - k) / &denominator)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedOutcome {
    pub probability: BigRational,
    pub graph: GrowthGraph,
    pub log: StepLog,
}

/// Every labelled outcome at horizon `t` with its exact probability, in
/// canonical depth-first order. Materializes all outcomes: 3676 at `t = 6`,
/// about 1.9e7 at the cap.
pub fn enumerate_outcomes(t: u64, p: &BigRational) -> Result<Vec<WeightedOutcome>> {
    check_horizon(t)?;
    let scales = path_scales(t, p);
    let params = ModelParams {
        p: rational_to_f64(p),
        t_max: t,
        seed: 0,
    };
    let roots = frontier(t);
    let chunks = par::map(&roots, Execution::Parallel, |root| {
        let mut out = Vec::new();
        let mut node = root.clone();
        expand(&mut node, t, &mut |leaf: &Node| {
            let log = StepLog {
                params,
                records: leaf.path.clone(),
            };
            let graph = log.replay().expect("enumerated paths are valid");
            let probability = &scales[leaf.vertex_steps] * BigRational::from_integer(leaf.weight.into());
            out.push(WeightedOutcome {
                probability,
                graph,
                log,
            });
        });
        out
    });
    Ok(chunks.into_iter().flatten().collect())
}

/// Exact expectations of several statistics in one enumeration pass.
pub fn exact_expectations(t: u64, p: &BigRational, stats: &[Statistic]) -> Result<Vec<BigRational>> {
    exact_expectations_with(t, p, stats, Execution::Parallel)
}

pub fn exact_expectations_with(
    t: u64,
    p: &BigRational,
    stats: &[Statistic],
    exec: Execution,
) -> Result<Vec<BigRational>> {
    check_horizon(t)?;
    let slots = t as usize;
    let roots = frontier(t);
    // sums[stat][k] = sum over paths with k vertex-steps of weight * statistic
    let partials = par::map(&roots, exec, |root| {
        let mut sums = vec![vec![0u128; slots]; stats.len()];
        let mut node = root.clone();
        expand(&mut node, t, &mut |leaf: &Node| {
            for (acc, &stat) in sums.iter_mut().zip(stats) {
                acc[leaf.vertex_steps] += leaf.weight * u128::from(leaf.graph.statistic(stat));
            }
        });
        sums
    });
    let mut totals = vec![vec![0u128; slots]; stats.len()];
    for sums in partials {
        for (total, part) in totals.iter_mut().zip(sums) {
            for (a, b) in total.iter_mut().zip(part) {
                *a += b;
            }
        }
    }
    let scales = path_scales(t, p);
    Ok(totals
        .into_iter()
        .map(|by_k| {
            by_k.into_iter()
                .zip(&scales)
                .map(|(sum, scale)| scale * BigRational::from_integer(sum.into()))
                .fold(BigRational::zero(), |acc, x| acc + x)
        })
        .collect())
}

pub fn exact_expectation(t: u64, p: &BigRational, stat: Statistic) -> Result<BigRational> {
    Ok(exact_expectations(t, p, &[stat])?.remove(0))
}

/// Total probability mass of the enumeration; exactly one.
pub fn total_mass(t: u64, p: &BigRational) -> Result<BigRational> {
    check_horizon(t)?;
    let roots = frontier(t);
    let partials = par::map(&roots, Execution::Parallel, |root| {
        let mut by_k = vec![0u128; t as usize];
        let mut node = root.clone();
        expand(&mut node, t, &mut |leaf: &Node| by_k[leaf.vertex_steps] += leaf.weight);
        by_k
    });
    let scales = path_scales(t, p);
    let mut total = BigRational::zero();
    for by_k in partials {
        for (w, scale) in by_k.into_iter().zip(&scales) {
            total += scale * BigRational::from_integer(w.into());
        }
    }
    Ok(total)
}

/// One row of the `t,p,statistic,exact_value` CSV.
pub fn csv_row(t: u64, p: &BigRational, stat: Statistic, value: &BigRational) -> String {
    format!("{t},{},{stat},{}", render_rational(p), render_rational(value))
}

pub const CSV_HEADER: &str = "t,p,statistic,exact_value";
