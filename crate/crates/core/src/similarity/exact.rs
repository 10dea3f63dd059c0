use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::SimilarityError;
use crate::exact::modular::{PrimeField, PRIMES};
use crate::exact::{inverse, level};
use crate::graph::VertexPartition;
use crate::matrix::{is_identity, Matrix};
use crate::scalar::ExactScalar;

use super::walk::{check_order, extended_walk_matrix, ExtendedWalkMatrix};

/// Exact candidate `Q` with the outcome of each defining identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCertificate<T> {
    pub q: Matrix<T>,
    /// `Q†Q = I`.
    pub orthogonal_or_unitary: bool,
    /// `Q†AQ = B`.
    pub conjugates: bool,
    /// `Q†eᵢ = eᵢ` for every class.
    pub fixes_indicators: bool,
    /// `ℓ(Q)`.
    pub level: BigInt,
    /// `d_n(W̃_A)`; absent over the Gaussian rationals.
    pub walk_divisor: Option<BigInt>,
    /// Set for the Hermitian variant, where no uniqueness or divisibility
    /// statement backs the solve.
    pub heuristic: bool,
}

impl<T> ExactCertificate<T> {
    pub fn is_valid(&self) -> bool {
        self.orthogonal_or_unitary && self.conjugates && self.fixes_indicators
    }

    /// `ℓ(Q) | d_n(W̃_A)`, when a rational walk divisor is known and nonzero.
    pub fn level_divides(&self) -> Option<bool> {
        if self.heuristic {
            return None;
        }
        match &self.walk_divisor {
            Some(d) if !d.is_zero() => Some(d.is_multiple_of(&self.level)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactOutcome<T> {
    Certified(ExactCertificate<T>),
    /// `W̃_A` lacks full row rank; no uniqueness claim applies.
    RankDeficient {
        rank: usize,
        order: usize,
    },
    /// No `Q` exists. `certificate` holds the failed exact candidate; it is
    /// absent when the modular screen already refuted the identities.
    Rejected {
        certificate: Option<ExactCertificate<T>>,
    },
}

impl<T> ExactOutcome<T> {
    pub fn certificate(&self) -> Option<&ExactCertificate<T>> {
        match self {
            ExactOutcome::Certified(c) => Some(c),
            ExactOutcome::Rejected { certificate } => certificate.as_ref(),
            ExactOutcome::RankDeficient { .. } => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, ExactOutcome::Certified(_))
    }
}

#[derive(Debug, Clone)]
struct Residues {
    field: PrimeField,
    a: Vec<u64>,
    walk: Vec<u64>,
    walk_conj: Vec<u64>,
    /// `L·G⁻¹` with `L = ℓ(G⁻¹)`, when `G` is invertible.
    gram_inv: Option<Vec<u64>>,
    gram_level: u64,
}

/// The `A`-side data of the exact path, reusable across many `B`.
#[derive(Debug)]
pub struct PreparedWalk<T> {
    a: Matrix<T>,
    walk: ExtendedWalkMatrix<T>,
    rank: usize,
    gram_inv: Option<Matrix<T>>,
    residues: Option<Residues>,
    divisor: OnceLock<Option<BigInt>>,
}

fn reduce<T: ExactScalar>(m: &Matrix<T>, f: &PrimeField) -> Option<Vec<u64>> {
    m.entries().iter().map(|x| x.reduce_mod(f)).collect()
}

fn check_hermitian<T: ExactScalar>(a: &Matrix<T>) -> Result<(), SimilarityError> {
    if a.is_hermitian() {
        Ok(())
    } else {
        Err(SimilarityError::NotHermitian)
    }
}

impl<T: ExactScalar> PreparedWalk<T> {
    pub fn new(a: &Matrix<T>, partition: &VertexPartition) -> Result<Self, SimilarityError> {
        check_hermitian(a)?;
        let walk = extended_walk_matrix(a, partition)?;
        let w = walk.columns();
        let gram = w * &w.adjoint();
        let gram_inv = inverse(&gram).ok();
        let rank = if gram_inv.is_some() { a.rows() } else { walk.rank() };
        let residues = if a.is_integral() {
            let field = PrimeField::new(PRIMES[1]);
            let scaled_inv = gram_inv.as_ref().map(|g| {
                let l = level(g);
                (g.scale(&T::from_bigint(l.clone())), l)
            });
            Some(Residues {
                a: reduce(a, &field).expect("integral"),
                walk: reduce(w, &field).expect("integral"),
                walk_conj: reduce(&w.map(|x| x.conj()), &field).expect("integral"),
                gram_inv: scaled_inv.as_ref().map(|(g, _)| reduce(g, &field).expect("integral")),
                gram_level: scaled_inv
                    .map(|(_, l)| T::from_bigint(l).reduce_mod(&field).expect("integral"))
                    .unwrap_or(0),
                field,
            })
        } else {
            None
        };
        Ok(PreparedWalk { a: a.clone(), walk, rank, gram_inv, residues, divisor: OnceLock::new() })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn partition(&self) -> &VertexPartition {
        self.walk.partition()
    }

    pub fn walk(&self) -> &ExtendedWalkMatrix<T> {
        &self.walk
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn has_full_row_rank(&self) -> bool {
        self.gram_inv.is_some()
    }

    /// `d_n(W̃_A)`, computed once.
    pub fn walk_divisor(&self) -> Option<BigInt> {
        self.divisor.get_or_init(|| self.walk.last_invariant_factor()).clone()
    }

    /// Tests the integer identities `N†AN = L²B` and `N†eᵢ = L·eᵢ` for
    /// `N = L·G⁻¹W̃_AW̃_B†` modulo a prime. `false` proves that the
    /// exact candidate fails.
    fn screen(&self, other: &PreparedWalk<T>) -> bool {
        let (Some(ra), Some(rb)) = (&self.residues, &other.residues) else {
            return true;
        };
        let Some(ginv) = &ra.gram_inv else {
            return true;
        };
        let f = &ra.field;
        let n = self.a.rows();
        let cols = self.walk.columns().cols();
        let dot = |x: &[u64], y: &[u64]| x.iter().zip(y).fold(0u64, |acc, (&u, &v)| f.add(acc, f.mul(u, v)));
        // M = W̃_A W̃_B†, K = W̃_B W̃_A† = M†
        let mut m = vec![0u64; n * n];
        let mut k = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = dot(&ra.walk[i * cols..(i + 1) * cols], &rb.walk_conj[j * cols..(j + 1) * cols]);
                k[i * n + j] = dot(&rb.walk[i * cols..(i + 1) * cols], &ra.walk_conj[j * cols..(j + 1) * cols]);
            }
        }
        let product = |x: &[u64], y: &[u64]| {
            let mut out = vec![0u64; n * n];
            for i in 0..n {
                for l in 0..n {
                    let a = x[i * n + l];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..n {
                        out[i * n + j] = f.add(out[i * n + j], f.mul(a, y[l * n + j]));
                    }
                }
            }
            out
        };
        let q = product(ginv, &m);
        let qh = product(&k, ginv);
        let l = ra.gram_level;
        let l2 = f.mul(l, l);
        let lhs = product(&product(&qh, &ra.a), &q);
        if (0..n * n).any(|idx| lhs[idx] != f.mul(l2, rb.a[idx])) {
            return false;
        }
        // N†eᵢ = L·eᵢ: row sums of N† over each class
        for class in self.partition().classes() {
            let mut inside = vec![false; n];
            class.iter().for_each(|&v| inside[v] = true);
            for (r, &is_in) in inside.iter().enumerate() {
                let s = class.iter().fold(0u64, |acc, &c| f.add(acc, qh[r * n + c]));
                if s != if is_in { l } else { 0 } {
                    return false;
                }
            }
        }
        true
    }

    /// Solves `Q†W̃_A = W̃_B` through the Gram matrix and verifies it.
    pub fn certify(&self, other: &PreparedWalk<T>, use_screen: bool) -> ExactOutcome<T> {
        assert_eq!(self.partition(), other.partition(), "certificates need a shared partition");
        let Some(ginv) = &self.gram_inv else {
            return ExactOutcome::RankDeficient { rank: self.rank, order: self.a.rows() };
        };
        if use_screen && !self.screen(other) {
            return ExactOutcome::Rejected { certificate: None };
        }
        let wa = self.walk.columns();
        let wb = other.walk.columns();
        let q = ginv * &(wa * &wb.adjoint());
        let qh = q.adjoint();
        let part = self.partition();
        let orthogonal_or_unitary = is_identity(&(&qh * &q));
        let conjugates = &(&qh * &self.a) * &q == other.a;
        let fixes_indicators = (0..part.len()).all(|i| {
            let e: Matrix<T> = part.indicator_vector(i).expect("class index");
            &qh * &e == e
        });
        let heuristic = T::imaginary_unit().is_some();
        let cert = ExactCertificate {
            level: level(&q),
            q,
            orthogonal_or_unitary,
            conjugates,
            fixes_indicators,
            walk_divisor: if heuristic { None } else { self.walk_divisor() },
            heuristic,
        };
        if cert.is_valid() {
            ExactOutcome::Certified(cert)
        } else {
            ExactOutcome::Rejected { certificate: Some(cert) }
        }
    }
}

/// Exact reconstruction of `Q` with `Q†AQ = B` and `Q†eᵢ = eᵢ`.
pub fn reconstruct_q_exact<T: ExactScalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    partition: &VertexPartition,
) -> Result<ExactOutcome<T>, SimilarityError> {
    check_order(b, partition)?;
    let pa = PreparedWalk::new(a, partition)?;
    let pb = PreparedWalk::new(b, partition)?;
    Ok(pa.certify(&pb, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Digraph, Graph};
    use crate::matrix::permutation_matrix;
    use crate::{GaussianMatrix, Rational, RationalMatrix};

    #[test]
    fn identity_certificate() {
        let g = Graph::from_edges(6, &[(0, 2), (0, 3), (0, 5), (1, 2), (1, 4), (2, 3)]);
        let a: RationalMatrix = g.adjacency();
        let out = reconstruct_q_exact(&a, &a, &g.degree_partition()).unwrap();
        let ExactOutcome::Certified(c) = out else { panic!("{out:?}") };
        assert!(is_identity(&c.q));
        assert_eq!(c.level, BigInt::from(1));
        assert_eq!(c.level_divides(), Some(true));
    }

    #[test]
    fn permutation_certificate() {
        // no automorphism preserves the degree classes {4,5}, {1,3}, {0,2}
        let g = Graph::from_edges(6, &[(0, 2), (0, 3), (0, 5), (1, 2), (1, 4), (2, 3)]);
        let part = g.degree_partition();
        let pa = PreparedWalk::new(&g.adjacency::<Rational>(), &part).unwrap();
        assert!(pa.has_full_row_rank(), "rank {}", pa.rank());
        let classes = part.classes();
        let mut perm: Vec<usize> = (0..6).collect();
        for c in classes {
            if c.len() >= 2 {
                perm.swap(c[0], c[1]);
            }
        }
        let h = g.permuted(&perm);
        assert_ne!(g, h);
        let pb = PreparedWalk::new(&h.adjacency::<Rational>(), &part).unwrap();
        for screen in [false, true] {
            let ExactOutcome::Certified(c) = pa.certify(&pb, screen) else { panic!() };
            assert_eq!(c.q, permutation_matrix(&perm));
            assert_eq!(c.level, BigInt::from(1));
        }
    }

    #[test]
    fn rank_deficient_and_rejected() {
        let k3: RationalMatrix = Graph::complete(3).adjacency();
        let out = reconstruct_q_exact(&k3, &k3, &VertexPartition::trivial(3)).unwrap();
        assert_eq!(out, ExactOutcome::RankDeficient { rank: 1, order: 3 });

        let g = Graph::from_edges(6, &[(0, 2), (0, 3), (0, 5), (1, 2), (1, 4), (2, 3)]);
        let part = g.degree_partition();
        let other = Graph::from_edges(6, &[(0, 2), (1, 2), (1, 3), (2, 3), (0, 4), (0, 5)]);
        assert_eq!(other.degree_partition(), part);
        let out = reconstruct_q_exact(&g.adjacency::<Rational>(), &other.adjacency(), &part).unwrap();
        let ExactOutcome::Rejected { certificate: Some(c) } = out else { panic!("{out:?}") };
        assert!(!c.is_valid());
        let pa = PreparedWalk::new(&g.adjacency::<Rational>(), &part).unwrap();
        let pb = PreparedWalk::new(&other.adjacency::<Rational>(), &part).unwrap();
        assert_eq!(pa.certify(&pb, true), ExactOutcome::Rejected { certificate: None });
    }

    #[test]
    fn hermitian_permutation_certificate() {
        let mut d = Digraph::empty(4);
        for (u, v) in [(0, 1), (1, 2), (2, 0), (2, 3), (3, 2)] {
            d.add_arc(u, v);
        }
        let part = VertexPartition::discrete(4);
        let a: GaussianMatrix = d.hermitian_adjacency();
        let out = reconstruct_q_exact(&a, &a, &part).unwrap();
        let ExactOutcome::Certified(c) = out else { panic!("{out:?}") };
        assert!(c.heuristic);
        assert_eq!(c.level_divides(), None);
        assert!(is_identity(&c.q));
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let a = RationalMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]);
        assert_eq!(reconstruct_q_exact(&a, &a, &VertexPartition::trivial(2)), Err(SimilarityError::NotHermitian));
    }
}
