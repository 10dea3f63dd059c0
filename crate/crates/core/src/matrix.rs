//! Dense row-major matrices over any [`Scalar`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{AlgebraError, ParseError};
use crate::scalar::{ExactScalar, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Matrix { rows, cols, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| T::from_i64(rows[i][j]))
    }

    pub fn column(values: Vec<T>) -> Self {
        let n = values.len();
        Matrix { rows: n, cols: 1, data: values }
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c.clone() * x.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    pub fn require_square(&self) -> Result<usize, AlgebraError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(AlgebraError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Horizontal concatenation; all blocks must have the same row count.
    pub fn hstack(blocks: &[Self]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        assert!(blocks.iter().all(|b| b.rows == rows));
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.cols;
        }
        out
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.cols != rhs.rows {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[k * rhs.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    let cur = std::mem::replace(&mut out.data[idx], T::zero());
                    out.data[idx] = cur + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).fold(T::zero(), |a, b| a + b)
    }
}

impl<T: ExactScalar> Matrix<T> {
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(ExactScalar::is_integral)
    }

    /// First non-integral entry, if any.
    pub fn require_integral(&self) -> Result<(), AlgebraError> {
        match self.data.iter().position(|x| !x.is_integral()) {
            None => Ok(()),
            Some(k) => Err(AlgebraError::NotIntegral { row: k / self.cols, col: k % self.cols }),
        }
    }

    /// Real integral matrix as big integers.
    pub fn to_integer_matrix(&self) -> Result<Matrix<BigInt>, AlgebraError> {
        let mut data = Vec::with_capacity(self.data.len());
        for (k, x) in self.data.iter().enumerate() {
            match x.to_integer() {
                Some(v) => data.push(v),
                None => return Err(AlgebraError::NotIntegral { row: k / self.cols, col: k % self.cols }),
            }
        }
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn from_integer_matrix(m: &Matrix<BigInt>) -> Self {
        Matrix { rows: m.rows, cols: m.cols, data: m.data.iter().cloned().map(T::from_bigint).collect() }
    }

    pub fn to_numeric(&self) -> nalgebra::DMatrix<T::Numeric> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_numeric())
    }

    /// Line-oriented text: `rows cols` then the row-major entries.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ExactScalar::to_text).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        let (hl, header) =
            lines.next().ok_or(ParseError::Matrix { line: 1, msg: "missing `rows cols` header".into() })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| ParseError::Matrix { line: hl, msg: format!("bad header `{header}`") })?;
        let [rows, cols] = dims[..] else {
            return Err(ParseError::Matrix { line: hl, msg: "header needs two numbers".into() });
        };
        let mut data = Vec::with_capacity(rows * cols);
        let mut last = hl;
        for (ln, line) in lines {
            last = ln;
            for tok in line.split_whitespace() {
                let v = T::parse_text(tok).map_err(|e| ParseError::Matrix { line: ln, msg: e.to_string() })?;
                data.push(v);
            }
        }
        if data.len() != rows * cols {
            return Err(ParseError::Matrix {
                line: last,
                msg: format!("expected {} entries, found {}", rows * cols, data.len()),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Entries as exact strings, row by row.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(ExactScalar::to_text).collect()).collect()
    }
}

impl Matrix<BigInt> {
    /// Gcd of all entries (zero for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.data.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        self.mul_unchecked(rhs)
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.shape(), rhs.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.shape(), rhs.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Permutation matrix `P` with `P[perm[u]][u] = 1`, so that
/// `(Pᵀ A P)[u][v] = A[perm[u]][perm[v]]`.
pub fn permutation_matrix<T: Scalar>(perm: &[usize]) -> Matrix<T> {
    let n = perm.len();
    let mut p = Matrix::zeros(n, n);
    for (u, &pu) in perm.iter().enumerate() {
        p[(pu, u)] = T::one();
    }
    p
}

/// True when `m` is the identity matrix.
pub fn is_identity<T: Scalar>(m: &Matrix<T>) -> bool {
    m.is_square()
        && (0..m.rows()).all(|i| (0..m.cols()).all(|j| if i == j { m[(i, j)].is_one() } else { m[(i, j)].is_zero() }))
}
