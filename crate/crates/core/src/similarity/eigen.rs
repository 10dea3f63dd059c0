use nalgebra::{ComplexField, DMatrix, SymmetricEigen};

use crate::error::SimilarityError;
use crate::graph::VertexPartition;

/// One distinct eigenvalue `λⱼ` of the compressed matrix together with the
/// coupling vectors `α_{j,1}, …, α_{j,p}` stored as the columns of `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBlock<N: ComplexField> {
    pub lambda: f64,
    pub multiplicity: usize,
    /// `mⱼ × p`.
    pub alpha: DMatrix<N>,
}

impl<N: ComplexField<RealField = f64> + Copy> EigenBlock<N> {
    /// `⟨α_{j,i}, α_{j,ℓ}⟩` for all `i, ℓ`.
    pub fn gram(&self) -> DMatrix<N> {
        self.alpha.adjoint() * &self.alpha
    }
}

/// `P†O†AOP` in arrow form: `a_{iℓ}` in the leading `p × p` block,
/// `diag(λ)` below it, and the coupling vectors in the lower-left block.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBlockDecomposition<N: ComplexField> {
    /// Orthonormal basis starting with the normalized class indicators.
    pub o: DMatrix<N>,
    /// `diag(I_p, U)` with `U` diagonalizing the trailing block of `O†AO`.
    pub p: DMatrix<N>,
    /// Distinct eigenvalues in increasing order.
    pub blocks: Vec<EigenBlock<N>>,
    /// `a_{iℓ} = eᵢ†Ae_ℓ / (‖eᵢ‖‖e_ℓ‖)`.
    pub diagonal: DMatrix<N>,
    pub spectral_radius: f64,
    pub warnings: Vec<String>,
}

/// Basis with `eᵢ/‖eᵢ‖` first, then Helmert vectors inside each class, then
/// the standard vectors of uncovered vertices.
pub fn class_basis<N: ComplexField<RealField = f64> + Copy>(partition: &VertexPartition) -> DMatrix<N> {
    let n = partition.order();
    let mut o = DMatrix::<N>::zeros(n, n);
    let mut col = 0;
    for class in partition.classes() {
        let w = N::from_real(1.0 / (class.len() as f64).sqrt());
        for &v in class {
            o[(v, col)] = w;
        }
        col += 1;
    }
    for class in partition.classes() {
        for k in 1..class.len() {
            let kf = k as f64;
            let w = 1.0 / (kf * (kf + 1.0)).sqrt();
            for &v in &class[..k] {
                o[(v, col)] = N::from_real(w);
            }
            o[(class[k], col)] = N::from_real(-kf * w);
            col += 1;
        }
    }
    let covered: Vec<bool> = partition.class_of().iter().map(Option::is_some).collect();
    for v in (0..n).filter(|&v| !covered[v]) {
        o[(v, col)] = N::one();
        col += 1;
    }
    debug_assert_eq!(col, n);
    o
}

pub(crate) fn hermitian_defect<N: ComplexField<RealField = f64> + Copy>(a: &DMatrix<N>) -> f64 {
    (a - a.adjoint()).norm()
}

pub(crate) fn spectral_radius<N: ComplexField<RealField = f64> + Copy>(a: &DMatrix<N>) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(a.clone()).eigenvalues.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Numeric decomposition of a Hermitian matrix relative to a partition.
///
/// Eigenvalues closer than `tol·max(1, ρ)` are merged; gaps up to ten times
/// that are reported in `warnings`.
pub fn eigenblock_decompose_numeric<N: ComplexField<RealField = f64> + Copy>(
    a: &DMatrix<N>,
    partition: &VertexPartition,
    tol: f64,
) -> Result<EigenBlockDecomposition<N>, SimilarityError> {
    let n = a.nrows();
    if tol.is_nan() || tol <= 0.0 {
        return Err(SimilarityError::Tolerance);
    }
    if a.ncols() != n || partition.order() != n {
        return Err(SimilarityError::Order { matrix: n, partition: partition.order() });
    }
    let rho = spectral_radius(a);
    if hermitian_defect(a) > 1e-12 * rho.max(1.0) {
        return Err(SimilarityError::NotHermitian);
    }
    let p = partition.len();
    let o = class_basis::<N>(partition);
    let c = o.adjoint() * a * &o;
    let diagonal = c.view((0, 0), (p, p)).into_owned();
    let m = n - p;
    let (values, vectors) = if m == 0 {
        (Vec::new(), DMatrix::<N>::zeros(0, 0))
    } else {
        let eig = SymmetricEigen::new(c.view((p, p), (m, m)).into_owned());
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
        let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(m, m, |r, k| eig.eigenvectors[(r, order[k])]);
        (values, vectors)
    };
    let mut pm = DMatrix::<N>::identity(n, n);
    pm.view_mut((p, p), (m, m)).copy_from(&vectors);
    // rows of the lower-left block, in eigenvector coordinates
    let coupling = vectors.adjoint() * c.view((p, 0), (m, p));

    let scale = tol * rho.max(1.0);
    let mut warnings = Vec::new();
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for k in 0..m {
        match groups.last_mut() {
            Some((_, len)) if values[k] - values[k - 1] <= scale => *len += 1,
            _ => {
                if k > 0 && values[k] - values[k - 1] <= 10.0 * scale {
                    warnings.push(format!(
                        "ambiguous eigenvalue gap {:.3e} between {} and {}",
                        values[k] - values[k - 1],
                        values[k - 1],
                        values[k]
                    ));
                }
                groups.push((k, 1));
            }
        }
    }
    let blocks = groups
        .into_iter()
        .map(|(start, len)| EigenBlock {
            lambda: values[start..start + len].iter().sum::<f64>() / len as f64,
            multiplicity: len,
            alpha: coupling.view((start, 0), (len, p)).into_owned(),
        })
        .collect();
    Ok(EigenBlockDecomposition { o, p: pm, blocks, diagonal, spectral_radius: rho, warnings })
}

impl<N: ComplexField<RealField = f64> + Copy> EigenBlockDecomposition<N> {
    pub fn class_count(&self) -> usize {
        self.diagonal.nrows()
    }

    /// Order of the decomposed matrix.
    pub fn order(&self) -> usize {
        self.o.nrows()
    }

    /// The arrow-form matrix rebuilt from `diagonal`, the eigenvalues and
    /// the coupling vectors.
    pub fn arrow_form(&self) -> DMatrix<N> {
        let n = self.order();
        let p = self.class_count();
        let mut out = DMatrix::<N>::zeros(n, n);
        out.view_mut((0, 0), (p, p)).copy_from(&self.diagonal);
        let mut row = p;
        for b in &self.blocks {
            for r in 0..b.multiplicity {
                out[(row + r, row + r)] = N::from_real(b.lambda);
                for i in 0..p {
                    out[(row + r, i)] = b.alpha[(r, i)];
                    out[(i, row + r)] = b.alpha[(r, i)].conjugate();
                }
            }
            row += b.multiplicity;
        }
        out
    }

    /// `P†O†MOP`.
    pub fn rotate(&self, m: &DMatrix<N>) -> DMatrix<N> {
        let op = &self.o * &self.p;
        op.adjoint() * m * op
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::Rational;

    fn numeric(g: &Graph) -> DMatrix<f64> {
        g.adjacency::<Rational>().to_numeric()
    }

    #[test]
    fn basis_is_orthonormal() {
        let part = VertexPartition::new(6, vec![vec![0, 2, 5], vec![1], vec![3]]).unwrap();
        let o = class_basis::<f64>(&part);
        assert!((o.transpose() * &o - DMatrix::identity(6, 6)).norm() < 1e-12);
        assert!((o[(0, 0)] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_has_one_block() {
        let part = VertexPartition::new(5, vec![vec![0, 1], vec![2, 3, 4]]).unwrap();
        let d = eigenblock_decompose_numeric(&DMatrix::<f64>::zeros(5, 5), &part, 1e-9).unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].multiplicity, 3);
        assert_eq!(d.blocks[0].lambda, 0.0);
        assert!(d.blocks[0].alpha.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn arrow_form_reproduces_rotation() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (1, 4)]);
        let a = numeric(&g);
        let d = eigenblock_decompose_numeric(&a, &g.degree_partition(), 1e-9).unwrap();
        assert!((d.rotate(&a) - d.arrow_form()).amax() < 1e-10);
        assert_eq!(d.blocks.iter().map(|b| b.multiplicity).sum::<usize>(), 6 - d.class_count());
        assert!(d.diagonal.iter().all(|&x| x >= -1e-12));
        assert!(d.blocks.windows(2).all(|w| w[0].lambda < w[1].lambda));
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(eigenblock_decompose_numeric(&a, &VertexPartition::trivial(2), 1e-9).is_err());
        assert!(eigenblock_decompose_numeric(&DMatrix::<f64>::zeros(2, 2), &VertexPartition::trivial(2), 0.0).is_err());
    }
}
