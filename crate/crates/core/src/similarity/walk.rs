use num_bigint::BigInt;

use crate::error::SimilarityError;
use crate::exact::{rank, smith_normal_form};
use crate::graph::VertexPartition;
use crate::matrix::Matrix;
use crate::scalar::ExactScalar;

/// `W̃_A = [e₁, Ae₁, …, Aⁿ⁻¹e₁, …, e_p, …, Aⁿ⁻¹e_p]`, an `n × np` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedWalkMatrix<T> {
    base: Matrix<T>,
    partition: VertexPartition,
    columns: Matrix<T>,
}

pub(crate) fn check_order<T>(a: &Matrix<T>, partition: &VertexPartition) -> Result<usize, SimilarityError>
where
    T: crate::scalar::Scalar,
{
    let n = a.require_square()?;
    if partition.order() != n {
        return Err(SimilarityError::Order { matrix: n, partition: partition.order() });
    }
    Ok(n)
}

pub fn extended_walk_matrix<T: ExactScalar>(
    a: &Matrix<T>,
    partition: &VertexPartition,
) -> Result<ExtendedWalkMatrix<T>, SimilarityError> {
    let n = check_order(a, partition)?;
    let p = partition.len();
    let mut columns = Matrix::zeros(n, n * p);
    for i in 0..p {
        let mut v: Matrix<T> = partition.indicator_vector(i)?;
        for j in 0..n {
            for r in 0..n {
                columns[(r, i * n + j)] = v[(r, 0)].clone();
            }
            if j + 1 < n {
                v = a * &v;
            }
        }
    }
    Ok(ExtendedWalkMatrix { base: a.clone(), partition: partition.clone(), columns })
}

/// The ordinary walk matrix `[e, Ae, …, Aⁿ⁻¹e]`.
pub fn walk_matrix<T: ExactScalar>(a: &Matrix<T>) -> Result<ExtendedWalkMatrix<T>, SimilarityError> {
    let n = a.require_square()?;
    extended_walk_matrix(a, &VertexPartition::trivial(n))
}

impl<T: ExactScalar> ExtendedWalkMatrix<T> {
    pub fn base(&self) -> &Matrix<T> {
        &self.base
    }

    pub fn partition(&self) -> &VertexPartition {
        &self.partition
    }

    pub fn columns(&self) -> &Matrix<T> {
        &self.columns
    }

    pub fn rank(&self) -> usize {
        rank(&self.columns)
    }

    pub fn has_full_row_rank(&self) -> bool {
        self.rank() == self.columns.rows()
    }

    /// `d_n`, the `n`-th invariant factor, for walk matrices with rational
    /// integer entries. Zero when the rank is below `n`.
    pub fn last_invariant_factor(&self) -> Option<BigInt> {
        let n = self.columns.rows();
        if self.columns.cols() < n {
            return Some(BigInt::from(0));
        }
        let snf = smith_normal_form(&self.columns).ok()?;
        Some(snf.invariant_factors().get(n.wrapping_sub(1)).cloned().unwrap_or_else(|| BigInt::from(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::{Rational, RationalMatrix};

    #[test]
    fn zero_matrix_walks() {
        let part = VertexPartition::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        let w = extended_walk_matrix(&RationalMatrix::zeros(3, 3), &part).unwrap();
        let expect = RationalMatrix::from_i64_rows(&[&[1, 0, 0, 0, 0, 0], &[0, 0, 0, 1, 0, 0], &[1, 0, 0, 0, 0, 0]]);
        assert_eq!(w.columns(), &expect);
        assert_eq!(w.last_invariant_factor(), Some(BigInt::from(0)));
    }

    #[test]
    fn k2_walk_matrix() {
        let a: RationalMatrix = Graph::complete(2).adjacency();
        let w = walk_matrix(&a).unwrap();
        assert_eq!(w.columns(), &RationalMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]));
        assert_eq!(w.rank(), 1);
    }

    #[test]
    fn p3_extended_walk_rank() {
        let g = Graph::path(3);
        let w = extended_walk_matrix(&g.adjacency::<Rational>(), &g.degree_partition()).unwrap();
        assert_eq!(w.columns().shape(), (3, 6));
        // every column is a combination of (1,0,1) and (0,1,0): the swap of
        // the two leaves fixes both indicators and commutes with A
        assert_eq!(w.rank(), 2);
        assert!(!w.has_full_row_rank());
        assert_eq!(w.last_invariant_factor(), Some(BigInt::from(0)));
    }

    #[test]
    fn full_rank_example() {
        let g = Graph::from_edges(6, &[(0, 2), (0, 3), (0, 5), (1, 2), (1, 4), (2, 3)]);
        let w = extended_walk_matrix(&g.adjacency::<Rational>(), &g.degree_partition()).unwrap();
        assert!(w.has_full_row_rank());
        let d = w.last_invariant_factor().unwrap();
        assert!(d > BigInt::from(0));
        // d₁⋯d_n divides every maximal minor, hence so does d_n
        let cols = w.columns();
        let rows: Vec<usize> = (0..6).collect();
        for pick in [[0, 1, 2, 6, 7, 12], [0, 1, 6, 7, 12, 13], [0, 6, 12, 1, 7, 13], [0, 1, 2, 3, 6, 12]] {
            let minor = crate::exact::det(&cols.submatrix(&rows, &pick)).unwrap().to_integer();
            assert!(num_integer::Integer::is_multiple_of(&minor, &d), "{minor} {d}");
        }
    }

    #[test]
    fn order_mismatch() {
        let part = VertexPartition::trivial(2);
        assert!(extended_walk_matrix(&RationalMatrix::zeros(3, 3), &part).is_err());
    }
}
