//! Maximum clique by branch-and-bound.
//!
//! Vertices are processed in degeneracy order; each one seeds a subproblem
//! over its later neighbors (at most the degeneracy many), solved with a
//! bitset branch-and-bound pruned by greedy-coloring bounds. The search is
//! deterministic and stops after a budget of node expansions, returning the
//! best clique seen so far flagged as non-exact.

use serde::Serialize;

use crate::simple::SimpleGraph;

pub const DEFAULT_CLIQUE_BUDGET: u64 = 50_000_000;
pub const DEFAULT_CLIQUE_POOL: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    pub size: usize,
    /// `false` when the budget ran out before optimality was proven.
    pub exact: bool,
    /// Vertices of the best clique found (0-based, ascending).
    pub witness: Vec<usize>,
    pub expansions: u64,
}

/// Matula–Beck smallest-last ordering via bucket queue.
fn degeneracy_order(graph: &SimpleGraph) -> Vec<usize> {
    let n = graph.n();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_degree + 1];
    for v in 0..n {
        buckets[degree[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d: usize = 0;
    while order.len() < n {
        d = d.saturating_sub(1);
        while buckets[d].is_empty() {
            d += 1;
        }
        let v = buckets[d].pop().unwrap();
        // Stale bucket entries are skipped.
        if removed[v] || degree[v] != d {
            continue;
        }
        removed[v] = true;
        order.push(v);
        for &w in graph.neighbors(v) {
            let w = w as usize;
            if !removed[w] {
                degree[w] -= 1;
                buckets[degree[w]].push(w);
            }
        }
    }
    order
}

#[derive(Clone)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn empty(bits: usize) -> Self {
        Bitset(vec![0; bits.div_ceil(64)])
    }

    fn full(bits: usize) -> Self {
        let mut set = Self::empty(bits);
        for i in 0..bits {
            set.insert(i);
        }
        set
    }

    #[inline]
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    fn intersect(&self, other: &Bitset) -> Bitset {
        Bitset(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn subtract(&mut self, other: &Bitset) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }
}

struct Search<'a> {
    adjacency: &'a [Bitset],
    clique: Vec<usize>,
    best: Vec<usize>,
    floor: usize,
    expansions: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn best_len(&self) -> usize {
        self.best.len().max(self.floor)
    }

    /// Greedy sequential coloring; vertices come out by nondecreasing color.
    fn color_sort(&self, candidates: &Bitset) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = candidates.clone();
        let (mut order, mut colors) = (Vec::new(), Vec::new());
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut available = uncolored.clone();
            while let Some(v) = available.first() {
                available.remove(v);
                available.subtract(&self.adjacency[v]);
                uncolored.remove(v);
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }

    fn expand(&mut self, mut candidates: Bitset) {
        self.expansions += 1;
        if self.expansions > self.budget {
            self.exhausted = true;
            return;
        }
        let (order, colors) = self.color_sort(&candidates);
        for idx in (0..order.len()).rev() {
            if self.clique.len() + colors[idx] <= self.best_len() {
                return;
            }
            let v = order[idx];
            self.clique.push(v);
            let next = candidates.intersect(&self.adjacency[v]);
            if next.is_empty() {
                if self.clique.len() > self.best_len() {
                    self.best = self.clique.clone();
                }
            } else {
                self.expand(next);
            }
            self.clique.pop();
            candidates.remove(v);
            if self.exhausted {
                return;
            }
        }
    }
}

/// Maximum clique of `graph`, exact unless the expansion budget runs out.
pub fn max_clique(graph: &SimpleGraph, budget: u64) -> CliqueResult {
    let n = graph.n();
    if n == 0 {
        return CliqueResult {
            size: 0,
            exact: true,
            witness: Vec::new(),
            expansions: 0,
        };
    }

    let order = degeneracy_order(graph);
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }

    let mut best: Vec<usize> = vec![order[n - 1]];
    let mut expansions = 0;
    let mut exhausted = false;
    let mut local = vec![u32::MAX; n];

    // Reverse order visits the dense core first, which raises the bound early.
    for &v in order.iter().rev() {
        let later: Vec<usize> = graph
            .neighbors(v)
            .iter()
            .map(|&w| w as usize)
            .filter(|&w| position[w] > position[v])
            .collect();
        if later.len() < best.len() {
            continue;
        }

        let m = later.len();
        for (i, &w) in later.iter().enumerate() {
            local[w] = i as u32;
        }
        let mut adjacency = vec![Bitset::empty(m); m];
        for (i, &w) in later.iter().enumerate() {
            if graph.degree(w) <= 8 * m {
                for &x in graph.neighbors(w) {
                    let j = local[x as usize];
                    if j != u32::MAX {
                        adjacency[i].insert(j as usize);
                    }
                }
            } else {
                for (j, &x) in later.iter().enumerate() {
                    if i != j && graph.has_edge(w, x) {
                        adjacency[i].insert(j);
                    }
                }
            }
        }
        for &w in &later {
            local[w] = u32::MAX;
        }

        let mut search = Search {
            adjacency: &adjacency,
            clique: Vec::new(),
            best: Vec::new(),
            floor: best.len() - 1,
            expansions,
            budget,
            exhausted: false,
        };
        search.expand(Bitset::full(m));
        expansions = search.expansions;
        if search.best.len() + 1 > best.len() {
            best = std::iter::once(v)
                .chain(search.best.iter().map(|&i| later[i]))
                .collect();
        }
        if search.exhausted {
            exhausted = true;
            break;
        }
    }

    best.sort_unstable();
    CliqueResult {
        size: best.len(),
        exact: !exhausted,
        witness: best,
        expansions,
    }
}

/// Maximum clique among the `k` vertices of largest multidegree, ties going
/// to the lower index (earlier birth). Always a lower bound on the clique
/// number of `graph`.
pub fn clique_greedy_in(graph: &SimpleGraph, degrees: &[u32], k: usize, budget: u64) -> CliqueResult {
    assert!(k >= 1, "candidate pool must be nonempty");
    let mut pool: Vec<usize> = (0..graph.n()).collect();
    if k < pool.len() {
        pool.select_nth_unstable_by_key(k - 1, |&v| (std::cmp::Reverse(degrees[v]), v));
        pool.truncate(k);
    }
    pool.sort_unstable();
    let mut result = max_clique(&graph.induced(&pool), budget);
    result.witness = result.witness.iter().map(|&i| pool[i]).collect();
    result.witness.sort_unstable();
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    /// Size of the largest clique by exhaustive enumeration of every clique,
    /// each grown only by larger vertex ids.
    fn brute_force(graph: &SimpleGraph) -> usize {
        fn grow(graph: &SimpleGraph, clique: &mut Vec<usize>, from: usize, best: &mut usize) {
            *best = (*best).max(clique.len());
            for v in from..graph.n() {
                if clique.iter().all(|&c| graph.has_edge(c, v)) {
                    clique.push(v);
                    grow(graph, clique, v + 1, best);
                    clique.pop();
                }
            }
        }
        let mut best = 0;
        grow(graph, &mut Vec::new(), 0, &mut best);
        best
    }

    fn is_clique(graph: &SimpleGraph, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &a)| vertices[i + 1..].iter().all(|&b| graph.has_edge(a, b)))
    }

    fn random_graph(rng: &mut impl Rng, n: usize, density: f64) -> SimpleGraph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.random::<f64>() < density {
                    edges.push((a, b));
                }
            }
        }
        SimpleGraph::from_edges(n, edges)
    }

    #[test]
    fn degeneracy_order_is_a_permutation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = random_graph(&mut rng, 60, 0.2);
        let mut order = degeneracy_order(&g);
        order.sort_unstable();
        assert_eq!(order, (0..60).collect::<Vec<_>>());
    }

    #[test]
    fn small_anchors() {
        assert_eq!(max_clique(&SimpleGraph::from_edges(0, []), 10).size, 0);
        assert_eq!(max_clique(&SimpleGraph::from_edges(3, []), 10).size, 1);
        let k5 = SimpleGraph::from_edges(5, (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))));
        let r = max_clique(&k5, DEFAULT_CLIQUE_BUDGET);
        assert_eq!((r.size, r.exact), (5, true));
        assert_eq!(r.witness, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn exhausted_budget_is_flagged() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let g = random_graph(&mut rng, 120, 0.6);
        let r = max_clique(&g, 3);
        assert!(!r.exact);
        assert!(r.size >= 1 && is_clique(&g, &r.witness));
        let full = max_clique(&g, DEFAULT_CLIQUE_BUDGET);
        assert!(full.exact && full.size >= r.size);
    }

    #[test]
    fn greedy_pool_caps_the_answer() {
        let k4 = SimpleGraph::from_edges(4, (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))));
        let degrees = [3, 3, 3, 3];
        assert_eq!(clique_greedy_in(&k4, &degrees, 2, 100).size, 2);
        assert_eq!(clique_greedy_in(&k4, &degrees, 2, 100).witness, vec![0, 1]);
        assert_eq!(clique_greedy_in(&k4, &degrees, 10, 100).size, 4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matches_enumeration(seed in any::<u64>(), n in 1usize..=20, density in 0.05f64..0.95) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(&mut rng, n, density);
            let exact = max_clique(&g, DEFAULT_CLIQUE_BUDGET);
            prop_assert!(exact.exact);
            prop_assert_eq!(exact.size, brute_force(&g));
            prop_assert!(is_clique(&g, &exact.witness));

            let degrees: Vec<u32> = (0..n).map(|v| g.degree(v) as u32).collect();
            for k in [1, 3, 8, 20] {
                let greedy = clique_greedy_in(&g, &degrees, k, DEFAULT_CLIQUE_BUDGET);
                prop_assert!(greedy.size <= exact.size);
                prop_assert!(is_clique(&g, &greedy.witness));
                if k >= n {
                    prop_assert_eq!(greedy.size, exact.size);
                }
            }
        }
    }
}
