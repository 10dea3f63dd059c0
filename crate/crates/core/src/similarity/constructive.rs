use nalgebra::{ComplexField, DMatrix};
use serde::Serialize;

use crate::error::SimilarityError;
use crate::graph::VertexPartition;
use crate::matrix::Matrix;
use crate::scalar::ExactScalar;

use super::eigen::{eigenblock_decompose_numeric, EigenBlockDecomposition};

/// Numeric `Q` with its verification residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericCertificate<N: ComplexField> {
    pub q: DMatrix<N>,
    /// `‖Q†Q − I‖_F`.
    pub orthogonality_residual: f64,
    /// `‖Q†AQ − B‖_F`.
    pub conjugation_residual: f64,
    /// `maxᵢ ‖Q†eᵢ − eᵢ‖`.
    pub indicator_residual: f64,
    /// Residuals at or below this bound count as verified.
    pub threshold: f64,
    /// Components of the quotient graph, for nonnegative real inputs.
    pub components: Option<Vec<Vec<usize>>>,
    pub warnings: Vec<String>,
}

impl<N: ComplexField> NumericCertificate<N> {
    pub fn is_valid(&self) -> bool {
        self.orthogonality_residual <= self.threshold
            && self.conjugation_residual <= self.threshold
            && self.indicator_residual <= self.threshold
    }

    pub fn max_residual(&self) -> f64 {
        self.orthogonality_residual.max(self.conjugation_residual).max(self.indicator_residual)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstructiveOutcome<N: ComplexField> {
    Certified(NumericCertificate<N>),
    /// The spectra, the `a_{iℓ}` or the coupling Gram matrices differ.
    ClaimViolated(ClaimReport),
    /// `Q` was assembled but does not verify.
    ResidualFailure(NumericCertificate<N>),
}

impl<N: ComplexField> ConstructiveOutcome<N> {
    pub fn is_certified(&self) -> bool {
        matches!(self, ConstructiveOutcome::Certified(_))
    }

    pub fn certificate(&self) -> Option<&NumericCertificate<N>> {
        match self {
            ConstructiveOutcome::Certified(c) | ConstructiveOutcome::ResidualFailure(c) => Some(c),
            ConstructiveOutcome::ClaimViolated(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignCase {
    /// `a_{iℓ} = b_{iℓ} > 0`.
    Positive,
    /// `a_{iℓ} = b_{iℓ} = 0`.
    Zero,
    Mismatch,
}

/// One compared quantity: `a_{iℓ}` against `b_{iℓ}` when `lambda` is
/// absent, otherwise `⟨α_{j,i}, α_{j,ℓ}⟩` against `⟨β_{j,i}, β_{j,ℓ}⟩`.
/// Complex values are `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimEntry {
    pub i: usize,
    pub l: usize,
    pub lambda: Option<f64>,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub difference: f64,
    pub violation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<SignCase>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvaluePair {
    pub lambda: f64,
    pub multiplicity_a: usize,
    pub multiplicity_b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    /// Eigenvalues of either compressed matrix with both multiplicities.
    pub spectrum: Vec<EigenvaluePair>,
    pub spectrum_match: bool,
    pub entries: Vec<ClaimEntry>,
    pub violations: usize,
    /// Comparison threshold used for every entry.
    pub threshold: f64,
    pub warnings: Vec<String>,
}

impl ClaimReport {
    pub fn holds(&self) -> bool {
        self.spectrum_match && self.violations == 0
    }
}

fn parts<N: ComplexField<RealField = f64> + Copy>(x: N) -> [f64; 2] {
    [x.real(), x.imaginary()]
}

fn is_nonnegative_real<N: ComplexField<RealField = f64> + Copy>(m: &DMatrix<N>) -> bool {
    m.iter().all(|x| x.imaginary() == 0.0 && x.real() >= 0.0)
}

/// Compares two decompositions of the same order and partition.
pub fn compare_decompositions<N: ComplexField<RealField = f64> + Copy>(
    da: &EigenBlockDecomposition<N>,
    db: &EigenBlockDecomposition<N>,
    tol: f64,
    sign_dichotomy: bool,
) -> ClaimReport {
    let rho = da.spectral_radius.max(db.spectral_radius).max(1.0);
    let cluster = tol * rho;
    let threshold = tol * rho * rho;
    let p = da.class_count();
    let mut entries = Vec::new();
    for i in 0..p {
        for l in 0..p {
            let (x, y) = (da.diagonal[(i, l)], db.diagonal[(i, l)]);
            let difference = (x - y).modulus();
            let violation = difference > threshold;
            let sign = (sign_dichotomy && i != l).then(|| {
                if violation {
                    SignCase::Mismatch
                } else if x.real() > threshold {
                    SignCase::Positive
                } else {
                    SignCase::Zero
                }
            });
            entries.push(ClaimEntry { i, l, lambda: None, lhs: parts(x), rhs: parts(y), difference, violation, sign });
        }
    }
    // merge both eigenvalue lists; an eigenvalue missing on one side
    // contributes a zero Gram matrix there
    let (mut ia, mut ib) = (0, 0);
    let mut spectrum = Vec::new();
    let zero = DMatrix::<N>::zeros(p, p);
    while ia < da.blocks.len() || ib < db.blocks.len() {
        let la = da.blocks.get(ia).map(|b| b.lambda);
        let lb = db.blocks.get(ib).map(|b| b.lambda);
        let (take_a, take_b) = match (la, lb) {
            (Some(x), Some(y)) if (x - y).abs() <= cluster => (true, true),
            (Some(x), Some(y)) => (x < y, y < x),
            (Some(_), None) => (true, false),
            _ => (false, true),
        };
        let ga = if take_a { da.blocks[ia].gram() } else { zero.clone() };
        let gb = if take_b { db.blocks[ib].gram() } else { zero.clone() };
        let lambda = if take_a { da.blocks[ia].lambda } else { db.blocks[ib].lambda };
        spectrum.push(EigenvaluePair {
            lambda,
            multiplicity_a: if take_a { da.blocks[ia].multiplicity } else { 0 },
            multiplicity_b: if take_b { db.blocks[ib].multiplicity } else { 0 },
        });
        for i in 0..p {
            for l in 0..p {
                let difference = (ga[(i, l)] - gb[(i, l)]).modulus();
                entries.push(ClaimEntry {
                    i,
                    l,
                    lambda: Some(lambda),
                    lhs: parts(ga[(i, l)]),
                    rhs: parts(gb[(i, l)]),
                    difference,
                    violation: difference > threshold,
                    sign: None,
                });
            }
        }
        ia += take_a as usize;
        ib += take_b as usize;
    }
    let spectrum_match = spectrum.iter().all(|s| s.multiplicity_a == s.multiplicity_b);
    let violations = entries.iter().filter(|e| e.violation).count();
    let mut warnings = da.warnings.clone();
    warnings.extend(db.warnings.iter().cloned());
    ClaimReport { spectrum, spectrum_match, entries, violations, threshold, warnings }
}

/// Unitary `M` minimizing `‖M·from − to‖`, from the SVD of `to·from†`.
fn procrustes<N: ComplexField<RealField = f64> + Copy>(to: &DMatrix<N>, from: &DMatrix<N>) -> DMatrix<N> {
    let s = to * from.adjoint();
    let svd = s.svd(true, true);
    svd.u.expect("u requested") * svd.v_t.expect("v requested")
}

/// Builds `Q = O P_A R P_B† O†` from decompositions of `A` and `B`, where
/// `R = diag(I_p, M₁, …, M_q)` and each `Mⱼ` carries `βⱼ` onto `αⱼ`.
pub fn assemble_from_decompositions<N: ComplexField<RealField = f64> + Copy>(
    a: &DMatrix<N>,
    b: &DMatrix<N>,
    partition: &VertexPartition,
    da: &EigenBlockDecomposition<N>,
    db: &EigenBlockDecomposition<N>,
    tol: f64,
) -> ConstructiveOutcome<N> {
    let nonnegative = is_nonnegative_real(a) && is_nonnegative_real(b);
    let report = compare_decompositions(da, db, tol, nonnegative);
    if !report.holds() || da.blocks.len() != db.blocks.len() {
        return ConstructiveOutcome::ClaimViolated(report);
    }
    let n = da.order();
    let p = da.class_count();
    let mut r = DMatrix::<N>::identity(n, n);
    let mut offset = p;
    for (ba, bb) in da.blocks.iter().zip(&db.blocks) {
        let m = ba.multiplicity;
        r.view_mut((offset, offset), (m, m)).copy_from(&procrustes(&ba.alpha, &bb.alpha));
        offset += m;
    }
    let q = &da.o * &da.p * r * db.p.adjoint() * da.o.adjoint();
    let qh = q.adjoint();
    let rho = da.spectral_radius.max(db.spectral_radius).max(1.0);
    let indicator_residual = (0..p)
        .map(|i| {
            let mut e = DMatrix::<N>::zeros(n, 1);
            for &v in partition.classes()[i].iter() {
                e[(v, 0)] = N::one();
            }
            (&qh * &e - e).norm()
        })
        .fold(0.0, f64::max);
    let components = (nonnegative && partition.is_covering()).then(|| {
        let t = report.threshold;
        quotient_components(p, |i, l| da.diagonal[(i, l)].real() > t)
    });
    let cert = NumericCertificate {
        orthogonality_residual: (&qh * &q - DMatrix::<N>::identity(n, n)).norm(),
        conjugation_residual: (&qh * a * &q - b).norm(),
        indicator_residual,
        q,
        threshold: 100.0 * tol * rho * (n.max(1) as f64),
        components,
        warnings: report.warnings,
    };
    if cert.is_valid() {
        ConstructiveOutcome::Certified(cert)
    } else {
        ConstructiveOutcome::ResidualFailure(cert)
    }
}

#[allow(clippy::needless_range_loop)]
fn quotient_components(p: usize, edge: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; p];
    let mut out = Vec::new();
    for s in 0..p {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = out.len();
        let mut members = vec![];
        while let Some(u) = stack.pop() {
            members.push(u);
            for v in 0..p {
                if comp[v] == usize::MAX && edge(u, v) {
                    comp[v] = out.len();
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Runs the constructive reconstruction on numeric Hermitian matrices.
pub fn reconstruct_q_numeric<N: ComplexField<RealField = f64> + Copy>(
    a: &DMatrix<N>,
    b: &DMatrix<N>,
    partition: &VertexPartition,
    tol: f64,
) -> Result<ConstructiveOutcome<N>, SimilarityError> {
    let da = eigenblock_decompose_numeric(a, partition, tol)?;
    let db = eigenblock_decompose_numeric(b, partition, tol)?;
    Ok(assemble_from_decompositions(a, b, partition, &da, &db, tol))
}

pub fn reconstruct_q_constructive<T: ExactScalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    partition: &VertexPartition,
    tol: f64,
) -> Result<ConstructiveOutcome<T::Numeric>, SimilarityError> {
    reconstruct_q_numeric(&a.to_numeric(), &b.to_numeric(), partition, tol)
}

pub fn eigenblock_decompose<T: ExactScalar>(
    a: &Matrix<T>,
    partition: &VertexPartition,
    tol: f64,
) -> Result<EigenBlockDecomposition<T::Numeric>, SimilarityError> {
    eigenblock_decompose_numeric(&a.to_numeric(), partition, tol)
}

/// Tabulates every compared quantity of the claim behind the construction.
pub fn verify_claim_diagnostics<T: ExactScalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    partition: &VertexPartition,
    tol: f64,
) -> Result<ClaimReport, SimilarityError> {
    let (na, nb) = (a.to_numeric(), b.to_numeric());
    let da = eigenblock_decompose_numeric(&na, partition, tol)?;
    let db = eigenblock_decompose_numeric(&nb, partition, tol)?;
    Ok(compare_decompositions(&da, &db, tol, is_nonnegative_real(&na) && is_nonnegative_real(&nb)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Digraph, Graph};
    use crate::matrix::permutation_matrix;
    use crate::{GaussianMatrix, Rational, RationalMatrix};
    use num_complex::Complex;

    #[test]
    fn identity_instance() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]);
        let a: RationalMatrix = g.adjacency();
        let out = reconstruct_q_constructive(&a, &a, &g.degree_partition(), 1e-9).unwrap();
        let ConstructiveOutcome::Certified(c) = out else { panic!("{out:?}") };
        assert!(c.max_residual() <= 1e-8);
        assert!(c.components.is_some());
    }

    #[test]
    fn permuted_instance() {
        let g = Graph::from_edges(6, &[(0, 2), (0, 3), (0, 5), (1, 2), (1, 4), (2, 3)]);
        let part = g.degree_partition();
        let mut perm: Vec<usize> = (0..6).collect();
        for c in part.classes() {
            if c.len() >= 2 {
                perm.swap(c[0], c[1]);
            }
        }
        let h = g.permuted(&perm);
        let out = reconstruct_q_constructive(&g.adjacency::<Rational>(), &h.adjacency(), &part, 1e-9).unwrap();
        let ConstructiveOutcome::Certified(c) = out else { panic!("{out:?}") };
        let p = permutation_matrix::<Rational>(&perm).to_numeric();
        assert!((c.q - p).amax() < 1e-6);
    }

    #[test]
    fn diagnostics_flag_non_cospectral_pair() {
        let g = Graph::path(4);
        // another labelling of P₄ with the same degree classes
        let h = Graph::from_edges(4, &[(0, 2), (1, 2), (1, 3)]);
        let part = g.degree_partition();
        assert_eq!(part, h.degree_partition());
        let rep = verify_claim_diagnostics(&g.adjacency::<Rational>(), &h.adjacency(), &part, 1e-9).unwrap();
        assert!(rep.holds(), "relabelled paths are similar");
        let k = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (1, 3)]);
        let part = VertexPartition::trivial(4);
        let rep = verify_claim_diagnostics(&g.adjacency::<Rational>(), &k.adjacency(), &part, 1e-9).unwrap();
        assert!(!rep.holds());
        let part = g.degree_partition();
        let same = verify_claim_diagnostics(&g.adjacency::<Rational>(), &g.adjacency(), &part, 1e-9).unwrap();
        assert!(same.holds());
        assert!(same.entries.iter().all(|e| e.difference == 0.0));
        assert!(same.entries.iter().any(|e| e.sign == Some(SignCase::Positive)));
    }

    #[test]
    fn hermitian_instance() {
        let mut d = Digraph::empty(4);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)] {
            d.add_arc(u, v);
        }
        let part = VertexPartition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        let a: GaussianMatrix = d.hermitian_adjacency();
        let out = reconstruct_q_constructive(&a, &a, &part, 1e-9).unwrap();
        let ConstructiveOutcome::Certified(c) = out else { panic!("{out:?}") };
        assert!(c.components.is_none());
        let _: &DMatrix<Complex<f64>> = &c.q;
    }

    #[test]
    fn residuals_track_perturbation_size() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]);
        let a: DMatrix<f64> = g.adjacency::<Rational>().to_numeric();
        let part = g.degree_partition();
        let mut e = DMatrix::<f64>::zeros(5, 5);
        e[(1, 3)] = 1.0;
        e[(3, 1)] = 1.0;
        let mut prev = None;
        for eps in [1e-4, 1e-5, 1e-6] {
            let b = &a + &e * eps;
            let out = reconstruct_q_numeric(&a, &b, &part, 1e-3).unwrap();
            let c = out.certificate().cloned().or_else(|| {
                let ConstructiveOutcome::ClaimViolated(r) = &out else { unreachable!() };
                panic!("{:?}", r.violations)
            });
            let r = c.unwrap().conjugation_residual;
            assert!(r <= 10.0 * eps, "{r} vs {eps}");
            if let Some(p) = prev {
                let ratio: f64 = p / r;
                assert!(ratio > 3.0 && ratio < 30.0, "ratio {ratio}");
            }
            prev = Some(r);
        }
    }
}
