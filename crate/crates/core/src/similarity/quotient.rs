use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::SimilarityError;
use crate::graph::VertexPartition;
use crate::matrix::Matrix;
use crate::Rational;

use super::walk::check_order;

/// Graph on the classes with `uᵢu_ℓ` an edge iff `eᵢᵀAe_ℓ > 0`, `i ≠ ℓ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn quotient_graph(a: &Matrix<Rational>, partition: &VertexPartition) -> Result<QuotientGraph, SimilarityError> {
    check_order(a, partition)?;
    partition.require_covering()?;
    if let Some(k) = a.entries().iter().position(|x| x.is_negative()) {
        return Err(SimilarityError::NegativeEntry { row: k / a.cols(), col: k % a.cols() });
    }
    let p = partition.len();
    let mut edges = Vec::new();
    for i in 0..p {
        for l in i + 1..p {
            let positive = partition
                .class(i)?
                .iter()
                .any(|&u| partition.class(l).expect("class index").iter().any(|&v| !a[(u, v)].is_zero()));
            if positive {
                edges.push((i, l));
            }
        }
    }
    Ok(QuotientGraph { vertices: p, edges })
}

impl QuotientGraph {
    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for &(u, v) in &self.edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            parent[ru.max(rv)] = ru.min(rv);
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut index = vec![usize::MAX; self.vertices];
        for v in 0..self.vertices {
            let r = find(&mut parent, v);
            if index[r] == usize::MAX {
                index[r] = comps.len();
                comps.push(Vec::new());
            }
            comps[index[r]].push(v);
        }
        comps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn examples() {
        let k4 = Graph::complete(4);
        let q = quotient_graph(&k4.adjacency(), &k4.degree_partition()).unwrap();
        assert_eq!(q, QuotientGraph { vertices: 1, edges: vec![] });

        let p3 = Graph::path(3);
        let q = quotient_graph(&p3.adjacency(), &p3.degree_partition()).unwrap();
        assert_eq!(q.edges, vec![(0, 1)]);
        assert_eq!(q.components(), vec![vec![0, 1]]);

        // K₄ ∪ C₅: regular of degrees 3 and 2, no cross edges
        let g = Graph::complete(4).disjoint_union(&Graph::cycle(5));
        let q = quotient_graph(&g.adjacency(), &g.degree_partition()).unwrap();
        assert_eq!(q.components().len(), 2);
    }

    #[test]
    fn rejects_negative_and_partial() {
        let a = Matrix::<Rational>::from_i64_rows(&[&[0, -1], &[-1, 0]]);
        assert!(matches!(quotient_graph(&a, &VertexPartition::trivial(2)), Err(SimilarityError::NegativeEntry { .. })));
        let part = VertexPartition::new(2, vec![vec![0]]).unwrap();
        assert!(quotient_graph(&Matrix::zeros(2, 2), &part).is_err());
    }
}
