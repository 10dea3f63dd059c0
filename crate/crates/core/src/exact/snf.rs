use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::AlgebraError;
use crate::matrix::Matrix;
use crate::scalar::ExactScalar;

/// `M = U·S·V` with `U`, `V` unimodular and `S` diagonal,
/// `d₁ | d₂ | … | d_min(n,m)`, all `dᵢ ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: Matrix<BigInt>,
    pub s: Matrix<BigInt>,
    pub v: Matrix<BigInt>,
}

impl SmithDecomposition {
    /// `d₁, …, d_min(n,m)`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// `d_min(n,m)`; zero when the matrix is rank deficient, and `1` for an
    /// empty matrix.
    pub fn last_invariant_factor(&self) -> BigInt {
        self.invariant_factors().pop().unwrap_or_else(|| BigInt::from(1))
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Smith normal form of an integral matrix.
pub fn smith_normal_form<T: ExactScalar>(m: &Matrix<T>) -> Result<SmithDecomposition, AlgebraError> {
    let a = m.to_integer_matrix()?;
    Ok(SmithState::new(a).run())
}

pub fn last_invariant_factor<T: ExactScalar>(m: &Matrix<T>) -> Result<BigInt, AlgebraError> {
    Ok(smith_normal_form(m)?.last_invariant_factor())
}

/// Working state with the invariant `u · s · v == input`.
struct SmithState {
    u: Matrix<BigInt>,
    s: Matrix<BigInt>,
    v: Matrix<BigInt>,
}

impl SmithState {
    fn new(s: Matrix<BigInt>) -> Self {
        let (n, m) = s.shape();
        SmithState { u: Matrix::identity(n), s, v: Matrix::identity(m) }
    }

    fn rows(&self) -> usize {
        self.s.rows()
    }

    fn cols(&self) -> usize {
        self.s.cols()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols() {
            let t = self.s[(i, c)].clone();
            self.s[(i, c)] = self.s[(j, c)].clone();
            self.s[(j, c)] = t;
        }
        // U ← U·E⁻¹ swaps columns of U
        for r in 0..self.u.rows() {
            let t = self.u[(r, i)].clone();
            self.u[(r, i)] = self.u[(r, j)].clone();
            self.u[(r, j)] = t;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows() {
            let t = self.s[(r, i)].clone();
            self.s[(r, i)] = self.s[(r, j)].clone();
            self.s[(r, j)] = t;
        }
        for c in 0..self.v.cols() {
            let t = self.v[(i, c)].clone();
            self.v[(i, c)] = self.v[(j, c)].clone();
            self.v[(j, c)] = t;
        }
    }

    /// row_i ← row_i + c·row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        for k in 0..self.cols() {
            let v = &self.s[(j, k)] * c;
            self.s[(i, k)] += v;
        }
        // U ← U (I − c e_i e_jᵀ): column j of U loses c·column i
        for r in 0..self.u.rows() {
            let v = &self.u[(r, i)] * c;
            self.u[(r, j)] -= v;
        }
    }

    /// col_i ← col_i + c·col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        for r in 0..self.rows() {
            let v = &self.s[(r, j)] * c;
            self.s[(r, i)] += v;
        }
        // V ← (I − c e_j e_iᵀ) V: row j of V loses c·row i
        for k in 0..self.v.cols() {
            let v = &self.v[(i, k)] * c;
            self.v[(j, k)] -= v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols() {
            self.s[(i, k)] = -self.s[(i, k)].clone();
        }
        for r in 0..self.u.rows() {
            self.u[(r, i)] = -self.u[(r, i)].clone();
        }
    }

    /// Position of the nonzero entry of least absolute value in the
    /// trailing submatrix starting at `(t, t)`.
    fn smallest_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows() {
            for j in t..self.cols() {
                let x = &self.s[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(mut self) -> SmithDecomposition {
        let k = self.rows().min(self.cols());
        for t in 0..k {
            let Some((pi, pj)) = self.smallest_entry(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                if self.clear_column(t) || self.clear_row(t) {
                    continue;
                }
                // pivot now isolated; enforce divisibility of the remainder
                let pivot = self.s[(t, t)].clone();
                let offender = (t + 1..self.rows())
                    .find(|&i| (t + 1..self.cols()).any(|j| !self.s[(i, j)].is_multiple_of(&pivot)));
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::from(1)),
                    None => break,
                }
            }
            if self.s[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
        SmithDecomposition { u: self.u, s: self.s, v: self.v }
    }

    /// Reduces column `t` below the pivot. Returns true if the pivot changed
    /// (a smaller remainder was moved into place).
    fn clear_column(&mut self, t: usize) -> bool {
        for i in t + 1..self.rows() {
            if self.s[(i, t)].is_zero() {
                continue;
            }
            let q = self.s[(i, t)].div_floor(&self.s[(t, t)]);
            self.add_row(i, t, &-q);
        }
        let smaller = (t + 1..self.rows())
            .filter(|&i| !self.s[(i, t)].is_zero())
            .min_by(|&a, &b| self.s[(a, t)].abs().cmp(&self.s[(b, t)].abs()));
        match smaller {
            Some(i) => {
                self.swap_rows(t, i);
                true
            }
            None => false,
        }
    }

    fn clear_row(&mut self, t: usize) -> bool {
        for j in t + 1..self.cols() {
            if self.s[(t, j)].is_zero() {
                continue;
            }
            let q = self.s[(t, j)].div_floor(&self.s[(t, t)]);
            self.add_col(j, t, &-q);
        }
        let smaller = (t + 1..self.cols())
            .filter(|&j| !self.s[(t, j)].is_zero())
            .min_by(|&a, &b| self.s[(t, a)].abs().cmp(&self.s[(t, b)].abs()));
        match smaller {
            Some(j) => {
                self.swap_cols(t, j);
                true
            }
            None => false,
        }
    }
}
