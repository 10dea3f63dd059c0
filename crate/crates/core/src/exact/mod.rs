//! Exact linear algebra: determinants, characteristic polynomials, solving,
//! Smith normal form and matrix levels.

pub mod modular;
mod snf;

pub use snf::{last_invariant_factor, smith_normal_form, SmithDecomposition};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{AlgebraError, SolveError};
use crate::matrix::Matrix;
use crate::scalar::{ExactScalar, Scalar};

/// Determinant by fraction-free (Bareiss) elimination after clearing the
/// denominators of every row.
pub fn det<T: ExactScalar>(m: &Matrix<T>) -> Result<T, AlgebraError> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(T::one());
    }
    let mut a = m.clone();
    let mut scale = T::one();
    for i in 0..n {
        let l = a.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator_lcm()));
        if !l.is_one() {
            let c = T::from_bigint(l);
            for j in 0..n {
                a[(i, j)] = a[(i, j)].clone() * c.clone();
            }
            scale = scale * c;
        }
    }
    Ok(bareiss(a) / scale)
}

fn bareiss<T: ExactScalar>(mut a: Matrix<T>) -> T {
    let n = a.rows();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n.saturating_sub(1) {
        if a[(k, k)].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                return T::zero();
            };
            for j in 0..n {
                let tmp = a[(k, j)].clone();
                a[(k, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
            negate = !negate;
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[(i, j)].clone() * pivot.clone() - a[(i, k)].clone() * a[(k, j)].clone();
                a[(i, j)] = v / prev.clone();
            }
            a[(i, k)] = T::zero();
        }
        prev = pivot;
    }
    let d = a[(n - 1, n - 1)].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Coefficients of `det(tI - M)` in ascending powers of `t`, computed with
/// Berkowitz's division-free recurrence. The last coefficient is 1.
pub fn char_poly<T: Scalar>(m: &Matrix<T>) -> Result<Vec<T>, AlgebraError> {
    let n = m.require_square()?;
    // descending coefficients of the characteristic polynomial of the
    // leading r×r principal submatrix
    let mut poly = vec![T::one()];
    for r in 0..n {
        // Toeplitz column: 1, -a_rr, -R C, -R M C, ..., -R M^{r-1} C
        let mut col = Vec::with_capacity(r + 2);
        col.push(T::one());
        col.push(-m[(r, r)].clone());
        let mut v: Vec<T> = (0..r).map(|i| m[(i, r)].clone()).collect();
        for k in 0..r {
            let rv = (0..r).fold(T::zero(), |acc, j| acc + m[(r, j)].clone() * v[j].clone());
            col.push(-rv);
            if k + 1 < r {
                v = (0..r).map(|i| (0..r).fold(T::zero(), |acc, j| acc + m[(i, j)].clone() * v[j].clone())).collect();
            }
        }
        let mut next = vec![T::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, p) in poly.iter().enumerate().take(i + 1) {
                *slot = slot.clone() + col[i - j].clone() * p.clone();
            }
        }
        poly = next;
    }
    poly.reverse();
    Ok(poly)
}

/// Row echelon rank over an exact field.
pub fn rank<T: ExactScalar>(m: &Matrix<T>) -> usize {
    let mut a = m.clone();
    echelon(&mut a, m.cols()).len()
}

/// In-place Gauss–Jordan elimination on the first `pivot_cols` columns.
/// Returns the pivot column of each nonzero row.
fn echelon<T: ExactScalar>(a: &mut Matrix<T>, pivot_cols: usize) -> Vec<usize> {
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = T::one() / a[(r, c)].clone();
        for j in c..cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `A X = Y` exactly.
///
/// Inconsistent systems and systems whose solution is not unique are
/// reported as distinct errors.
pub fn solve_exact<T: ExactScalar>(a: &Matrix<T>, y: &Matrix<T>) -> Result<Matrix<T>, SolveError> {
    if a.rows() != y.rows() {
        return Err(SolveError::Dimension(format!("A has {} rows, Y has {}", a.rows(), y.rows())));
    }
    let n = a.cols();
    let mut aug = Matrix::hstack(&[a.clone(), y.clone()]);
    let pivots = echelon(&mut aug, n);
    let r = pivots.len();
    let inconsistent = (r..aug.rows()).any(|i| (n..aug.cols()).any(|j| !aug[(i, j)].is_zero()));
    if inconsistent {
        return Err(SolveError::Inconsistent);
    }
    if r < n {
        return Err(SolveError::RankDeficient { rank: r, cols: n });
    }
    Ok(Matrix::from_fn(n, y.cols(), |i, j| aug[(i, n + j)].clone()))
}

pub fn inverse<T: ExactScalar>(a: &Matrix<T>) -> Result<Matrix<T>, SolveError> {
    if !a.is_square() {
        return Err(SolveError::Dimension("inverse of a non-square matrix".into()));
    }
    solve_exact(a, &Matrix::identity(a.rows()))
}

/// Smallest positive integer `l` with `l·M` integral.
pub fn level<T: ExactScalar>(m: &Matrix<T>) -> BigInt {
    m.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator_lcm()))
}

/// True iff `M` is square, integral and has determinant ±1.
pub fn is_unimodular<T: ExactScalar>(m: &Matrix<T>) -> Result<bool, AlgebraError> {
    m.require_square()?;
    m.require_integral()?;
    let d = det(m)?;
    Ok(d == T::one() || d == -T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GaussianMatrix, Rational, RationalMatrix};
    use num_complex::Complex;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det(&RationalMatrix::identity(3)).unwrap(), q(1, 1));
        let swap = RationalMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(det(&swap).unwrap(), q(-1, 1));
        let frac = RationalMatrix::from_vec(2, 2, vec![q(1, 2), q(1, 3), q(1, 4), q(1, 5)]);
        assert_eq!(det(&frac).unwrap(), q(1, 10) - q(1, 12));
        assert!(det(&RationalMatrix::zeros(2, 3)).is_err());
        assert_eq!(det(&RationalMatrix::zeros(0, 0)).unwrap(), q(1, 1));
    }

    #[test]
    fn char_poly_examples() {
        let k2 = RationalMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(char_poly(&k2).unwrap(), ints(&[-1, 0, 1]));
        let p3 = RationalMatrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]);
        assert_eq!(char_poly(&p3).unwrap(), ints(&[0, -2, 0, 1]));
        assert_eq!(char_poly(&RationalMatrix::zeros(4, 4)).unwrap(), ints(&[0, 0, 0, 0, 1]));
        assert!(char_poly(&RationalMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn char_poly_over_gaussian_rationals() {
        // [[0, i], [-i, 0]] has eigenvalues ±1
        let h = GaussianMatrix::parse_text("2 2\n0 0/1+1/1i\n0/1-1/1i 0\n").unwrap();
        let cp = char_poly(&h).unwrap();
        let one = Complex::new(q(1, 1), q(0, 1));
        assert_eq!(cp, vec![-one.clone(), Complex::new(q(0, 1), q(0, 1)), one]);
    }

    #[test]
    fn rank_and_solve() {
        let a = RationalMatrix::from_i64_rows(&[&[2]]);
        let y = RationalMatrix::from_i64_rows(&[&[1]]);
        assert_eq!(solve_exact(&a, &y).unwrap()[(0, 0)], q(1, 2));

        let y3 = RationalMatrix::from_i64_rows(&[&[1, 2], &[3, 4], &[5, 6]]);
        assert_eq!(solve_exact(&RationalMatrix::identity(3), &y3).unwrap(), y3);

        let under = RationalMatrix::from_i64_rows(&[&[1, 1]]);
        let zero = RationalMatrix::from_i64_rows(&[&[0]]);
        assert_eq!(solve_exact(&under, &zero), Err(SolveError::RankDeficient { rank: 1, cols: 2 }));

        let sing = RationalMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        let rhs = RationalMatrix::from_i64_rows(&[&[1], &[2]]);
        assert_eq!(solve_exact(&sing, &rhs), Err(SolveError::Inconsistent));
        assert_eq!(rank(&sing), 1);
        assert_eq!(rank(&RationalMatrix::identity(4)), 4);
    }

    #[test]
    fn level_examples() {
        assert_eq!(level(&RationalMatrix::identity(3)), BigInt::from(1));
        let m = RationalMatrix::from_vec(2, 2, vec![q(1, 3), q(1, 2), q(0, 1), q(1, 1)]);
        assert_eq!(level(&m), BigInt::from(6));
        let fifth = RationalMatrix::from_vec(2, 2, vec![q(1, 5); 4]);
        assert_eq!(level(&fifth), BigInt::from(5));
    }

    #[test]
    fn unimodularity() {
        assert!(is_unimodular(&RationalMatrix::identity(3)).unwrap());
        assert!(!is_unimodular(&RationalMatrix::from_i64_rows(&[&[2, 0], &[0, 1]])).unwrap());
        assert!(is_unimodular(&RationalMatrix::from_i64_rows(&[&[1, 1], &[0, 1]])).unwrap());
        assert!(is_unimodular(&RationalMatrix::zeros(2, 3)).is_err());
        let frac = RationalMatrix::from_vec(1, 1, vec![q(1, 2)]);
        assert!(is_unimodular(&frac).is_err());
    }
}
