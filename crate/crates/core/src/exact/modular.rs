//! Arithmetic over prime fields `F_p` with `p` just below 2^62.
//!
//! All moduli are `1 mod 4`, so `-1` is a square and Gaussian integers map
//! homomorphically into `F_p`.

/// Primes `p ≡ 1 (mod 4)`, `2^61 < p < 2^62`, in decreasing order.
pub const PRIMES: [u64; 8] = [
    4611686018427387817,
    4611686018427387761,
    4611686018427387737,
    4611686018427387733,
    4611686018427387709,
    4611686018427387701,
    4611686018427387617,
    4611686018427387461,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    sqrt_m1: Option<u64>,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        let mut f = PrimeField { p, sqrt_m1: None };
        f.sqrt_m1 = f.find_sqrt_minus_one();
        f
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn sqrt_minus_one(&self) -> Option<u64> {
        self.sqrt_m1
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    fn find_sqrt_minus_one(&self) -> Option<u64> {
        if self.p % 4 != 1 {
            return None;
        }
        // c^((p-1)/4) squares to -1 for any quadratic non-residue c
        let minus_one = self.p - 1;
        (2..200u64).map(|c| self.pow(c, (self.p - 1) / 4)).find(|&r| self.mul(r, r) == minus_one)
    }

    /// Determinant of a row-major `n × n` matrix with entries in `[0, p)`.
    /// The buffer is consumed as scratch space.
    pub fn det_in_place(&self, a: &mut [u64], n: usize) -> u64 {
        debug_assert_eq!(a.len(), n * n);
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for k in 0..n {
                    a.swap(piv * n + k, col * n + k);
                }
                det = self.neg(det);
            }
            let pv = a[col * n + col];
            det = self.mul(det, pv);
            let inv = self.inv(pv);
            for r in col + 1..n {
                let f = a[r * n + col];
                if f == 0 {
                    continue;
                }
                let f = self.mul(f, inv);
                for k in col..n {
                    let v = self.mul(f, a[col * n + k]);
                    a[r * n + k] = self.sub(a[r * n + k], v);
                }
            }
        }
        det
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let f = PrimeField { p: n, sqrt_m1: None };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
