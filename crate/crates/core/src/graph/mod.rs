//! Unlabeled simple graphs: storage, edge-list I/O, random models and a
//! small-instance isomorphism test.

mod generate;
mod io;
mod iso;

pub use generate::{generate, GraphModel};
pub use io::{load_edge_list, write_edge_list, LoadReport};
pub use iso::{is_isomorphic_small, MAX_ISO_VERTICES};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph over the dense vertex set `0..n`.
///
/// Neighbor lists are kept sorted, so adjacency queries are a binary search.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge iterator. Self-loops and repeated edges are
    /// dropped; endpoints must be `< n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Domain(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                continue;
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        let mut twice = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Ok(Self {
            adj,
            edge_count: twice / 2,
        })
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|u| (0..n as u32).filter(|&v| v as usize != u).collect())
            .collect();
        Self {
            adj,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("in range")
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n > 2 {
            g = Self::from_edges(n, g.edges().chain([(n - 1, 0)])).expect("in range");
        }
        g
    }

    /// Star with vertex 0 at the center and `leaves` spokes.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("in range")
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Returns the graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Domain("relabeling is not a permutation".into()));
        }
        Self::from_edges(n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    pub fn degree_histogram(&self) -> DegreeDistribution {
        let n = self.vertex_count();
        let mut counts = vec![0u64; n.max(1)];
        for list in &self.adj {
            counts[list.len()] += 1;
        }
        counts.truncate(n);
        DegreeDistribution { counts }
    }

    /// Sorted degree sequence, a cheap isomorphism invariant.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    }
}

/// Vertex counts per degree: `counts[k]` vertices have degree `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    pub counts: Vec<u64>,
}

impl DegreeDistribution {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Sum of `k * counts[k]`, which is twice the edge count.
    pub fn degree_sum(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| k as u64 * c)
            .sum()
    }
}

/// Conditional-independence graph of a precision matrix: edge `(i, j)` iff
/// `|omega[i][j]| > tol` for `i != j`.
pub fn graph_from_precision(omega: &nalgebra::DMatrix<f64>, tol: f64) -> Result<Graph> {
    if !omega.is_square() {
        return Err(Error::Domain(format!(
            "precision matrix is {}x{}, expected square",
            omega.nrows(),
            omega.ncols()
        )));
    }
    let p = omega.nrows();
    let mut edges = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            if omega[(i, j)].abs() > tol || omega[(j, i)].abs() > tol {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(p, edges)
}

pub const DEFAULT_PRECISION_TOL: f64 = 1e-8;

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn complete_graph_degrees() {
        let g = Graph::complete(4);
        assert_eq!(g.edge_count(), 6);
        assert!((0..4).all(|v| g.degree(v) == 3));
        let h = g.degree_histogram();
        assert_eq!(h.counts, vec![0, 0, 0, 4]);
    }

    #[test]
    fn star_histogram() {
        let h = Graph::star(3).degree_histogram();
        assert_eq!(h.counts[1], 3);
        assert_eq!(h.counts[3], 1);
        assert_eq!(h.total(), 4);
        assert_eq!(h.degree_sum(), 6);
    }

    #[test]
    fn from_edges_drops_loops_and_duplicates() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (2, 2)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn relabel_rejects_non_permutation() {
        let g = Graph::path(3);
        assert!(g.relabel(&[0, 0, 1]).is_err());
        let h = g.relabel(&[2, 0, 1]).unwrap();
        assert!(h.has_edge(2, 0) && h.has_edge(0, 1));
    }

    #[test]
    fn identity_precision_has_no_edges() {
        let g = graph_from_precision(&DMatrix::identity(5, 5), DEFAULT_PRECISION_TOL).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.vertex_count(), 5);
    }

    #[test]
    fn ar1_and_cycle_precision_supports() {
        let mut ar = DMatrix::identity(4, 4);
        for i in 1..4 {
            ar[(i, i - 1)] = 0.5;
            ar[(i - 1, i)] = 0.5;
        }
        let g = graph_from_precision(&ar, DEFAULT_PRECISION_TOL).unwrap();
        assert_eq!(g, Graph::path(4));

        let mut cy = ar.clone();
        cy[(0, 3)] = 0.4;
        cy[(3, 0)] = 0.4;
        let g = graph_from_precision(&cy, DEFAULT_PRECISION_TOL).unwrap();
        assert_eq!(g, Graph::cycle(4));
    }

    #[test]
    fn non_square_precision_rejected() {
        assert!(graph_from_precision(&DMatrix::zeros(2, 3), 1e-8).is_err());
    }
}
