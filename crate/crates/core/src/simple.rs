/// Simple undirected graph in CSR form with sorted neighbor lists.
///
/// Vertices are `0..n`. Loops and parallel edges are dropped on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl SimpleGraph {
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut lists = vec![Vec::new(); n];
        for (a, b) in edges {
            if a != b {
                lists[a].push(b as u32);
                lists[b].push(a as u32);
            }
        }
        Self::from_lists(lists)
    }

    /// Builds from per-vertex neighbor lists, which must be symmetric.
    pub fn from_lists<I, L>(lists: I) -> Self
    where
        I: IntoIterator<Item = L>,
        L: Into<Vec<u32>>,
    {
        let mut offsets = vec![0];
        let mut targets = Vec::new();
        for (v, list) in lists.into_iter().enumerate() {
            let mut list: Vec<u32> = list.into();
            list.sort_unstable();
            list.dedup();
            targets.extend(list.into_iter().filter(|&w| w as usize != v));
            offsets.push(targets.len());
        }
        SimpleGraph { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn n_edges(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (x, y) = if self.degree(a) <= self.degree(b) { (a, b) } else { (b, a) };
        self.neighbors(x).binary_search(&(y as u32)).is_ok()
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> SimpleGraph {
        let mut position = rustc_hash::FxHashMap::default();
        for (i, &v) in vertices.iter().enumerate() {
            position.insert(v, i as u32);
        }
        SimpleGraph::from_lists(vertices.iter().map(|&v| {
            self.neighbors(v)
                .iter()
                .filter_map(|w| position.get(&(*w as usize)).copied())
                .collect::<Vec<_>>()
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_loops_and_duplicates() {
        let g = SimpleGraph::from_edges(3, [(0, 1), (1, 0), (1, 1), (1, 2), (0, 1)]);
        assert_eq!(g.n(), 3);
        assert_eq!(g.n_edges(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn induced_subgraph_relabels() {
        let k4 = SimpleGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let sub = k4.induced(&[3, 1]);
        assert_eq!(sub.n(), 2);
        assert_eq!(sub.neighbors(0), &[1]);
    }
}
