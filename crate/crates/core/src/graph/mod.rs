//! Simple graphs and digraphs with their (Hermitian) adjacency matrices.

pub mod graph6;
mod partition;

pub use graph6::{parse_digraph6, parse_graph6, to_digraph6, to_graph6};
pub use partition::VertexPartition;

use crate::matrix::Matrix;
use crate::scalar::{ExactScalar, Scalar};

/// Undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![false; n * n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Star with center 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges)
    }

    /// Panics on loops or out-of-range vertices.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "loops are not allowed");
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.adj[u * self.n + v] = true;
        self.adj[v * self.n + u] = true;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.n + v] = false;
        self.adj[v * self.n + u] = false;
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|u| (u + 1..self.n).map(move |v| (u, v))).filter(|&(u, v)| self.has_edge(u, v)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v * self.n..(v + 1) * self.n].iter().filter(|&&b| b).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Disjoint union, `other` relabelled after `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::empty(self.n + other.n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n);
        }
        g
    }

    /// The graph `H` with `uv ∈ E(H)` iff `perm[u] perm[v] ∈ E(self)`, so
    /// that `A_H = Pᵀ A P` for `P = permutation_matrix(perm)`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(perm[u], perm[v]) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Classes of equal degree, ordered by increasing degree.
    pub fn degree_partition(&self) -> VertexPartition {
        let d = self.degrees();
        VertexPartition::by_key(self.n, |v| d[v])
    }

    pub fn adjacency<T: Scalar>(&self) -> Matrix<T> {
        Matrix::from_fn(self.n, self.n, |u, v| if self.has_edge(u, v) { T::one() } else { T::zero() })
    }

    pub fn to_graph6(&self) -> String {
        graph6::to_graph6(self)
    }

    /// Graph on `n` vertices whose edge set is read from the bits of `mask`
    /// in graph6 order (`x(0,1), x(0,2), x(1,2), …`).
    pub fn from_mask(n: usize, mask: u64) -> Graph {
        let mut g = Graph::empty(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if mask >> k & 1 == 1 {
                    g.add_edge(i, j);
                }
                k += 1;
            }
        }
        g
    }
}

/// Directed graph without loops; opposite arcs may coexist.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    arcs: Vec<bool>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph { n, arcs: vec![false; n * n] }
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        assert!(u != v, "loops are not allowed");
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.arcs[u * self.n + v] = true;
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs[u * self.n + v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&w| self.has_arc(v, w)).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&w| self.has_arc(w, v)).count()
    }

    /// Classes of equal `(out-degree, in-degree)`, lexicographically ordered.
    pub fn degree_partition(&self) -> VertexPartition {
        let key: Vec<_> = (0..self.n).map(|v| (self.out_degree(v), self.in_degree(v))).collect();
        VertexPartition::by_key(self.n, |v| key[v])
    }

    pub fn permuted(&self, perm: &[usize]) -> Digraph {
        assert_eq!(perm.len(), self.n);
        let mut d = Digraph::empty(self.n);
        for u in 0..self.n {
            for v in 0..self.n {
                if u != v && self.has_arc(perm[u], perm[v]) {
                    d.add_arc(u, v);
                }
            }
        }
        d
    }

    /// `H(u,v)` is 1 on digons, `i` for a lone arc `u→v`, `-i` for a lone
    /// arc `v→u` and 0 otherwise.
    pub fn hermitian_adjacency<T: ExactScalar>(&self) -> Matrix<T> {
        let i = T::imaginary_unit().expect("Hermitian adjacency needs a field containing i");
        Matrix::from_fn(self.n, self.n, |u, v| match (self.has_arc(u, v), self.has_arc(v, u)) {
            (true, true) => T::one(),
            (true, false) => i.clone(),
            (false, true) => -i.clone(),
            (false, false) => T::zero(),
        })
    }

    pub fn to_digraph6(&self) -> String {
        graph6::to_digraph6(self)
    }

    /// Digraph from base-4 digits of `code`, one per unordered pair `u < v`
    /// in graph6 order: 0 none, 1 `u→v`, 2 `v→u`, 3 both.
    pub fn from_pair_code(n: usize, mut code: u64) -> Digraph {
        let mut d = Digraph::empty(n);
        for j in 1..n {
            for i in 0..j {
                match code & 3 {
                    1 => d.add_arc(i, j),
                    2 => d.add_arc(j, i),
                    3 => {
                        d.add_arc(i, j);
                        d.add_arc(j, i);
                    }
                    _ => {}
                }
                code >>= 2;
            }
        }
        d
    }
}
