use std::collections::HashSet;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};

/// Weighted, simple, undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    adj: Vec<Vec<(usize, f64)>>,
    total_weight: f64,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples. Endpoints are normalized to
    /// `u < v`; self-loops, repeated pairs and non-positive weights are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        let mut adj = vec![Vec::new(); n];
        let mut total = 0.0;
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, len: n });
                }
            }
            if u == v {
                return Err(invalid(format!("self-loop at vertex {u}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(invalid(format!("edge ({u},{v}) has non-positive weight {w}")));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !seen.insert((a, b)) {
                return Err(invalid(format!("duplicate edge ({a},{b})")));
            }
            list.push((a, b, w));
            adj[a].push((b, w));
            adj[b].push((a, w));
            total += w;
        }
        Ok(Self { n, edges: list, adj, total_weight: total })
    }

    pub fn unweighted(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, pairs.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn complete(n: usize) -> Self {
        let pairs = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
        Self::unweighted(n, pairs).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(invalid("cycle needs n >= 3"));
        }
        Self::unweighted(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Self {
        Self::unweighted(n, (1..n).map(|i| (i - 1, i))).expect("path graph is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    /// Sum of edge weights, `W`.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn weighted_degree(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum()
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|&(_, _, w)| w == 1.0)
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v, w) in &self.edges {
            a[(u, v)] = w;
            a[(v, u)] = w;
        }
        a
    }

    /// `L = D - A`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = -self.adjacency_matrix();
        for v in 0..self.n {
            l[(v, v)] = self.weighted_degree(v);
        }
        l
    }

    /// Subgraph induced by `vertices` (distinct, any order). Vertex `i` of the
    /// result is `vertices[i]` of `self`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<InducedSubgraph> {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(Error::IndexOutOfRange { index: v, len: self.n });
            }
            if local[v] != usize::MAX {
                return Err(invalid(format!("vertex {v} listed twice")));
            }
            local[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v, w) in &self.edges {
            let (a, b) = (local[u], local[v]);
            if a != usize::MAX && b != usize::MAX {
                edges.push((a, b, w));
            }
        }
        Ok(InducedSubgraph { graph: Graph::new(vertices.len(), edges)?, back_map: vertices.to_vec() })
    }
}

/// `G[S]` together with the map from its vertices back to the parent graph.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub back_map: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_simple_input() {
        assert!(Graph::unweighted(3, [(0, 0)]).is_err());
        assert!(Graph::unweighted(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1, 0.0)]).is_err());
        assert!(Graph::unweighted(2, [(0, 2)]).is_err());
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let g = Graph::new(4, [(0, 1, 2.0), (1, 2, 0.5), (0, 3, 1.0)]).unwrap();
        let l = g.laplacian();
        for i in 0..4 {
            let s: f64 = l.row(i).iter().sum();
            assert!(s.abs() < 1e-12);
        }
        assert_eq!(l, l.transpose());
        assert_eq!(g.total_weight(), 3.5);
        assert_eq!(g.weighted_degree(1), 2.5);
    }

    #[test]
    fn induced_subgraph_reindexes() {
        let g = Graph::complete(5);
        let sub = g.induced_subgraph(&[4, 1, 2]).unwrap();
        assert_eq!(sub.graph.n(), 3);
        assert_eq!(sub.graph.edge_count(), 3);
        assert_eq!(sub.back_map, vec![4, 1, 2]);
        let empty = g.induced_subgraph(&[]).unwrap();
        assert_eq!(empty.graph.n(), 0);
        assert!(g.induced_subgraph(&[1, 1]).is_err());
    }
}
