//! Ordered graphs: vertex set `[n]` with edges stored as increasing pairs.
//!
//! An `OrderedGraph` doubles as a subset of `V(Sh_n^2)`; its edges are the
//! shift-graph vertices under study. Edges are kept in a `BTreeSet` so every
//! iteration order (and hence every serialized artifact) is deterministic.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedGraph {
    n: u32,
    edges: BTreeSet<(u32, u32)>,
}

impl OrderedGraph {
    pub fn empty(n: u32) -> Self {
        OrderedGraph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn with_edges(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut g = OrderedGraph::empty(n);
        for (i, j) in edges {
            g.insert_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn insert_edge(&mut self, i: u32, j: u32) -> Result<bool> {
        if i == 0 || i >= j || j > self.n {
            return Err(Error::invalid(format!(
                "edge ({i},{j}) violates 1 <= i < j <= n = {}",
                self.n
            )));
        }
        Ok(self.edges.insert((i, j)))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_edge(&self, i: u32, j: u32) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn is_subgraph_of(&self, other: &OrderedGraph) -> bool {
        self.edges.is_subset(&other.edges)
    }

    /// Vertices incident to at least one edge, ascending.
    pub fn active_vertices(&self) -> Vec<u32> {
        let mut vs = BTreeSet::new();
        for &(i, j) in &self.edges {
            vs.insert(i);
            vs.insert(j);
        }
        vs.into_iter().collect()
    }

    /// Edges with both endpoints in `1..=m`, kept over ambient `m`.
    pub fn induced_prefix(&self, m: u32) -> OrderedGraph {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(_, j)| j <= m)
            .collect();
        OrderedGraph { n: m, edges }
    }

    /// Edges with both endpoints in `lo..=hi`, relabeled to `1..=hi-lo+1`.
    pub fn induced_window_relabeled(&self, lo: u32, hi: u32) -> OrderedGraph {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(i, j)| i >= lo && j <= hi)
            .map(|(i, j)| (i - lo + 1, j - lo + 1))
            .collect();
        OrderedGraph {
            n: hi - lo + 1,
            edges,
        }
    }

    /// The same edge set with all labels shifted up by `offset`, over ambient
    /// `n + offset`.
    pub fn shifted(&self, offset: u32) -> OrderedGraph {
        OrderedGraph {
            n: self.n + offset,
            edges: self
                .edges
                .iter()
                .map(|&(i, j)| (i + offset, j + offset))
                .collect(),
        }
    }

    /// Union over a common ambient `[n]`.
    pub fn union(&self, other: &OrderedGraph) -> Result<OrderedGraph> {
        if self.n != other.n {
            return Err(Error::invalid(format!(
                "ambient mismatch in union: {} vs {}",
                self.n, other.n
            )));
        }
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().copied());
        Ok(OrderedGraph { n: self.n, edges })
    }

    /// Number of edges crossing from `X` to `Y` (edge (i,j) with i in X, j in Y).
    pub fn crossing_count(&self, x: &BTreeSet<u32>, y: &BTreeSet<u32>) -> usize {
        self.edges
            .iter()
            .filter(|&&(i, j)| x.contains(&i) && y.contains(&j))
            .count()
    }
}

const ODD_CYCLE_VERTEX_GUARD: u64 = 100_000;

fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// Length of the shortest odd cycle of `Sh_n^k`, or `None` when bipartite.
///
/// Runs a parity-layered BFS from every vertex of the shift graph: the
/// shortest odd closed walk through `v` is the distance from `(v, even)` to
/// `(v, odd)` in the parity double cover, and the minimum over `v` is the odd
/// girth (any odd closed walk contains an odd cycle of at most its length).
pub fn shortest_odd_cycle(n: u32, k: usize) -> Result<Option<usize>> {
    if k < 2 || n as usize <= k {
        return Err(Error::invalid(format!("need n > k >= 2, got n={n}, k={k}")));
    }
    let count = binomial_u64(n as u64, k as u64)
        .filter(|&c| c <= ODD_CYCLE_VERTEX_GUARD)
        .ok_or_else(|| {
            Error::limit(format!(
                "C({n},{k}) exceeds the {ODD_CYCLE_VERTEX_GUARD} vertex guard"
            ))
        })?;

    // enumerate vertices in lexicographic order; index them
    let mut vertices: Vec<Vec<u32>> = Vec::with_capacity(count as usize);
    let mut current: Vec<u32> = (1..=k as u32).collect();
    loop {
        vertices.push(current.clone());
        let mut i = k;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if current[i] < n - (k - 1 - i) as u32 {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    let index: std::collections::BTreeMap<&[u32], usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_slice(), i))
        .collect();

    // successor adjacency: y follows x when y = (x_2..x_k, t)
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for (xi, x) in vertices.iter().enumerate() {
        let mut succ = x[1..].to_vec();
        succ.push(0);
        for t in x[k - 1] + 1..=n {
            succ[k - 1] = t;
            let yi = index[&succ[..]];
            adj[xi].push(yi);
            adj[yi].push(xi);
        }
    }

    let mut best: Option<usize> = None;
    let mut dist = vec![[usize::MAX; 2]; vertices.len()];
    let mut touched: Vec<usize> = Vec::new();
    for start in 0..vertices.len() {
        for &v in &touched {
            dist[v] = [usize::MAX; 2];
        }
        touched.clear();
        dist[start][0] = 0;
        touched.push(start);
        let mut queue = VecDeque::new();
        queue.push_back((start, 0usize));
        while let Some((u, parity)) = queue.pop_front() {
            let d = dist[u][parity];
            if let Some(b) = best {
                if d + 1 >= b {
                    continue;
                }
            }
            for &w in &adj[u] {
                let np = 1 - parity;
                if dist[w][np] == usize::MAX {
                    dist[w][np] = d + 1;
                    touched.push(w);
                    queue.push_back((w, np));
                }
            }
        }
        if dist[start][1] != usize::MAX {
            best = Some(best.map_or(dist[start][1], |b| b.min(dist[start][1])));
            if best == Some(3) {
                break;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_validation() {
        let mut g = OrderedGraph::empty(4);
        assert!(g.insert_edge(1, 2).unwrap());
        assert!(!g.insert_edge(1, 2).unwrap());
        assert!(g.insert_edge(2, 2).is_err());
        assert!(g.insert_edge(3, 2).is_err());
        assert!(g.insert_edge(0, 2).is_err());
        assert!(g.insert_edge(2, 5).is_err());
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn induced_and_shift() {
        let g = OrderedGraph::with_edges(6, [(1, 2), (2, 5), (4, 6)]).unwrap();
        let pre = g.induced_prefix(3);
        assert_eq!(pre.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        let shifted = pre.shifted(3);
        assert_eq!(shifted.n(), 6);
        assert_eq!(shifted.edges().collect::<Vec<_>>(), vec![(4, 5)]);
    }

    /// Independent oracle for the odd girth: boolean adjacency-matrix powers.
    /// The smallest odd L with a nonzero diagonal in A^L is the odd girth.
    fn odd_girth_by_matrix_powers(n: u32, k: usize, max_len: usize) -> Option<usize> {
        let all = crate::tuple::KTupleSet::full_vertex_set(n, k).unwrap();
        let vertices: Vec<_> = all.iter().cloned().collect();
        let m = vertices.len();
        let mut a = vec![vec![false; m]; m];
        for i in 0..m {
            for j in 0..m {
                a[i][j] = crate::tuple::shift_adjacent(&vertices[i], &vertices[j]).unwrap();
            }
        }
        let mut power = a.clone();
        for len in 2..=max_len {
            let mut next = vec![vec![false; m]; m];
            for i in 0..m {
                for l in 0..m {
                    if power[i][l] {
                        for j in 0..m {
                            if a[l][j] {
                                next[i][j] = true;
                            }
                        }
                    }
                }
            }
            power = next;
            if len % 2 == 1 && (0..m).any(|i| power[i][i]) {
                return Some(len);
            }
        }
        None
    }

    #[test]
    fn odd_girth_small_cases() {
        assert_eq!(shortest_odd_cycle(5, 2).unwrap(), Some(5));
        assert_eq!(shortest_odd_cycle(4, 2).unwrap(), None);
        assert_eq!(shortest_odd_cycle(7, 3).unwrap(), Some(7));
    }

    #[test]
    fn odd_girth_matches_matrix_power_oracle() {
        assert_eq!(odd_girth_by_matrix_powers(5, 2, 7), Some(5));
        assert_eq!(odd_girth_by_matrix_powers(4, 2, 9), None);
        assert_eq!(odd_girth_by_matrix_powers(7, 3, 7), Some(7));
        for n in 5..=8u32 {
            assert_eq!(
                shortest_odd_cycle(n, 2).unwrap(),
                odd_girth_by_matrix_powers(n, 2, 9),
                "odd girth mismatch at n={n}, k=2"
            );
        }
    }

    #[test]
    fn odd_girth_guards() {
        assert!(matches!(
            shortest_odd_cycle(3, 3),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            shortest_odd_cycle(500, 4),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn five_cycle_witness_verified_by_adjacency() {
        // (1,2),(2,3),(3,4),(4,5),(2,4) is an odd cycle in Sh_5^2
        use crate::tuple::{shift_adjacent, KTuple};
        let cycle = [
            KTuple::pair(1, 2).unwrap(),
            KTuple::pair(2, 3).unwrap(),
            KTuple::pair(3, 4).unwrap(),
            KTuple::pair(4, 5).unwrap(),
            KTuple::pair(2, 4).unwrap(),
        ];
        for i in 0..5 {
            assert!(shift_adjacent(&cycle[i], &cycle[(i + 1) % 5]).unwrap());
        }
    }
}
