//! Numeric scalars used throughout the crate.
//!
//! Two modes are supported: IEEE `f64` and exact arbitrary-precision rationals
//! ([`Rational`]). The mode is carried by the type; every algorithm that must
//! be exact (coefficient generation, Pochhammer products) is generic over
//! [`Scalar`].

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{NumOps, One, Signed, ToPrimitive, Zero};

use crate::error::{HypError, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Distance to the nearest integer below which a float is treated as that integer.
pub const INTEGER_TOL: f64 = 1e-12;

pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialEq + Zero + One + NumOps + Neg<Output = Self> + Send + Sync
{
    /// `true` for exact arithmetic.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    /// `num/den`; `den` must be nonzero.
    fn ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// The integer this value equals: exactly in rational mode, within
    /// [`INTEGER_TOL`] in float mode.
    fn as_integer(&self) -> Option<i64>;

    /// Zero exactly (rational) or within [`INTEGER_TOL`] (float).
    fn is_negligible(&self) -> bool;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn is_nonpositive_integer(&self) -> bool {
        matches!(self.as_integer(), Some(k) if k <= 0)
    }

    fn is_nonnegative_integer(&self) -> bool {
        matches!(self.as_integer(), Some(k) if k >= 0)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn as_integer(&self) -> Option<i64> {
        // beyond 2^53 every double is an integer but the conversion is meaningless
        if !self.is_finite() || self.abs() > 9.0e15 {
            return None;
        }
        let r = self.round();
        ((self - r).abs() <= INTEGER_TOL).then_some(r as i64)
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= INTEGER_TOL
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn as_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer().to_i64()
        } else {
            None
        }
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

/// Parses `"p/q"`, an integer, or a decimal with optional exponent
/// (`"0.25"`, `"-1.5e-3"`) into an exact rational. Decimals are converted
/// exactly, never through a float.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || HypError::Parse(format!("cannot parse {s:?} as a rational number"));
    if s.contains('/') {
        let (n, d) = s.split_once('/').ok_or_else(bad)?;
        let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(HypError::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(&all_digits).map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Parses a real number for float-mode commands; `"p/q"` is accepted too.
pub fn parse_real(s: &str) -> Result<f64> {
    if s.contains('/') {
        return Ok(Scalar::to_f64(&parse_rational(s)?));
    }
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| HypError::Parse(format!("cannot parse {s:?} as a real number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(HypError::Parse(format!("{s:?} is not finite")))
    }
}
