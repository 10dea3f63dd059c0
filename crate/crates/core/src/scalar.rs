//! Scalar traits shared by the dense matrix code.
//!
//! `Scalar` is the ring interface (enough for products and division-free
//! characteristic polynomials), `Field` adds division, and `ExactScalar`
//! covers the two exact fields used for certificates: big rationals and
//! Gaussian rationals.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::ComplexField;
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;
use crate::exact::modular::PrimeField;

/// Commutative ring element with an involutive conjugation.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Complex conjugate; the identity on real types.
    fn conj(&self) -> Self;

    fn from_i64(v: i64) -> Self;
}

/// A `Scalar` that also supports division by nonzero elements.
pub trait Field: Scalar + Div<Output = Self> {}

impl<T: Scalar + Div<Output = T>> Field for T {}

/// Exact field elements: arbitrary precision, reduced, serializable as fractions.
pub trait ExactScalar: Field + Eq {
    /// Floating-point counterpart used by the numeric reconstruction path.
    type Numeric: ComplexField<RealField = f64> + Copy;

    fn from_bigint(v: BigInt) -> Self;

    /// True when every component has denominator 1.
    fn is_integral(&self) -> bool;

    /// Least common multiple of the component denominators.
    fn denominator_lcm(&self) -> BigInt;

    /// The element as an integer, if it is a real integer.
    fn to_integer(&self) -> Option<BigInt>;

    /// Image under the ring map into `F_p` (sending `i` to a square root of
    /// -1 for Gaussian values). Requires an integral element.
    fn reduce_mod(&self, field: &PrimeField) -> Option<u64>;

    /// Upper bound on the absolute value, as a float.
    fn magnitude(&self) -> f64;

    fn to_numeric(&self) -> Self::Numeric;

    /// The imaginary unit, when the field contains one.
    fn imaginary_unit() -> Option<Self>;

    /// Serialized as `num/den` (real) or `a/b+c/di` (Gaussian).
    fn to_text(&self) -> String;

    fn parse_text(s: &str) -> Result<Self, ParseError>;
}

macro_rules! real_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn conj(&self) -> Self {
                self.clone()
            }

            fn from_i64(v: i64) -> Self {
                <$t>::from(v)
            }
        }
    )*};
}

real_scalar!(BigInt, i128);

impl Scalar for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Scalar for f64 {
    fn conj(&self) -> Self {
        *self
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for Complex<BigRational> {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_i64(v), BigRational::zero())
    }
}

impl Scalar for Complex<f64> {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn from_i64(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }
}

fn rational_text(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Scalar(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn reduce_bigint(v: &BigInt, field: &PrimeField) -> u64 {
    let m = BigInt::from(field.modulus());
    v.mod_floor(&m).to_u64().expect("residue fits in u64")
}

impl ExactScalar for BigRational {
    type Numeric = f64;

    fn from_bigint(v: BigInt) -> Self {
        BigRational::from_integer(v)
    }

    fn is_integral(&self) -> bool {
        self.denom().is_one()
    }

    fn denominator_lcm(&self) -> BigInt {
        self.denom().clone()
    }

    fn to_integer(&self) -> Option<BigInt> {
        self.is_integral().then(|| self.numer().clone())
    }

    fn reduce_mod(&self, field: &PrimeField) -> Option<u64> {
        self.is_integral().then(|| reduce_bigint(self.numer(), field))
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_numeric(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn imaginary_unit() -> Option<Self> {
        None
    }

    fn to_text(&self) -> String {
        rational_text(self)
    }

    fn parse_text(s: &str) -> Result<Self, ParseError> {
        parse_rational(s)
    }
}

impl ExactScalar for Complex<BigRational> {
    type Numeric = Complex<f64>;

    fn from_bigint(v: BigInt) -> Self {
        Complex::new(BigRational::from_integer(v), BigRational::zero())
    }

    fn is_integral(&self) -> bool {
        self.re.denom().is_one() && self.im.denom().is_one()
    }

    fn denominator_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    fn to_integer(&self) -> Option<BigInt> {
        (self.im.is_zero() && self.re.is_integer()).then(|| self.re.numer().clone())
    }

    fn reduce_mod(&self, field: &PrimeField) -> Option<u64> {
        if !self.is_integral() {
            return None;
        }
        let i = field.sqrt_minus_one()?;
        let re = reduce_bigint(self.re.numer(), field);
        let im = reduce_bigint(self.im.numer(), field);
        Some(field.add(re, field.mul(im, i)))
    }

    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }

    fn to_numeric(&self) -> Complex<f64> {
        Complex::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    fn imaginary_unit() -> Option<Self> {
        Some(Complex::new(BigRational::zero(), BigRational::one()))
    }

    fn to_text(&self) -> String {
        let im = rational_text(&self.im.abs());
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("{}{}{}i", rational_text(&self.re), sign, im)
    }

    fn parse_text(s: &str) -> Result<Self, ParseError> {
        let t = s.trim();
        let bad = || ParseError::Scalar(t.to_string());
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Complex::new(parse_rational(t)?, BigRational::zero()));
        };
        // split at the last sign that is not the leading one
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
        match split {
            Some(k) => {
                let re = parse_rational(&body[..k])?;
                let im_text = &body[k..];
                let im_text = im_text.strip_prefix('+').unwrap_or(im_text);
                let im = match im_text {
                    "" | "-" => return Err(bad()),
                    _ => parse_rational(im_text)?,
                };
                Ok(Complex::new(re, im))
            }
            None => {
                let im = match body {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    _ => parse_rational(body)?,
                };
                Ok(Complex::new(BigRational::zero(), im))
            }
        }
    }
}
