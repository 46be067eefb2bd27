//! Numeric backends shared by the symmetric-function and process code.
//!
//! Evaluations are generic over [`Scalar`] so the same routines run in
//! binary64, in exact rationals, and in truncated power series with exact
//! rational coefficients (used to compare generating functions degree by
//! degree).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn powi(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// `2^e` for a possibly negative exponent.
    fn pow2(e: i64) -> Self {
        let p = Self::from_i64(2).powi(e.unsigned_abs() as u32);
        if e >= 0 {
            p
        } else {
            Self::one() / p
        }
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn powi(&self, e: u32) -> Self {
        f64::powi(*self, e as i32)
    }
    fn pow2(e: i64) -> Self {
        2f64.powi(e as i32)
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Power series `Σ_{k ≤ DEG} c_k s^k` in one formal variable with exact
/// rational coefficients; terms above `DEG` are discarded.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<const DEG: usize> {
    coeffs: Vec<BigRational>,
}

impl<const DEG: usize> QSeries<DEG> {
    pub fn constant(c: BigRational) -> Self {
        let mut coeffs = vec![<BigRational as Zero>::zero(); DEG + 1];
        coeffs[0] = c;
        Self { coeffs }
    }

    /// The formal variable `s` itself.
    pub fn var() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(c: i64, power: usize) -> Self {
        let mut coeffs = vec![<BigRational as Zero>::zero(); DEG + 1];
        if power <= DEG {
            coeffs[power] = BigRational::from_integer(BigInt::from(c));
        }
        Self { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        coeffs.resize(DEG + 1, <BigRational as Zero>::zero());
        Self { coeffs }
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Multiplicative inverse; fails when the constant term vanishes.
    pub fn try_inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if Zero::is_zero(c0) {
            return Err(Error::InvalidInput(
                "series with zero constant term is not invertible".into(),
            ));
        }
        let inv0 = c0.recip();
        let mut out = vec![<BigRational as Zero>::zero(); DEG + 1];
        out[0] = inv0.clone();
        for n in 1..=DEG {
            let mut acc = <BigRational as Zero>::zero();
            for k in 1..=n {
                if !Zero::is_zero(&self.coeffs[k]) {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out[n] = -acc * &inv0;
        }
        Ok(Self { coeffs: out })
    }
}

impl<const DEG: usize> Add for QSeries<DEG> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let coeffs = self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a + b).collect();
        Self { coeffs }
    }
}

impl<const DEG: usize> Sub for QSeries<DEG> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let coeffs = self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a - b).collect();
        Self { coeffs }
    }
}

impl<const DEG: usize> Neg for QSeries<DEG> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(|a| -a).collect(),
        }
    }
}

impl<const DEG: usize> Mul for QSeries<DEG> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = vec![<BigRational as Zero>::zero(); DEG + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(DEG + 1 - i) {
                if !Zero::is_zero(b) {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }
}

impl<const DEG: usize> Div for QSeries<DEG> {
    type Output = Self;
    /// Panics when the divisor has a zero constant term.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.try_inverse().expect("division by a series with zero constant term");
        self * inv
    }
}

impl<const DEG: usize> Scalar for QSeries<DEG> {
    fn zero() -> Self {
        Self::constant(<BigRational as Zero>::zero())
    }
    fn one() -> Self {
        Self::constant(<BigRational as One>::one())
    }
    fn from_i64(v: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(v)))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"0.125"` into an
/// exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::InvalidInput(format!("cannot parse {text:?} as a rational number"));
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if Zero::is_zero(&q) {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = int_part.abs() * &scale + frac_part;
        let num = if negative { -mag } else { mag };
        return Ok(BigRational::new(num, scale));
    }
    let p: BigInt = text.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact square root of a rational, when it exists.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}
