//! Coefficient rings used throughout the crate.
//!
//! Every algebraic object (polynomials, truncated series, Jacobi data) is
//! generic over [`Ring`]; numeric scalars additionally implement [`Scalar`].
//! Two scalar kinds are provided: `f64` for numerics and [`Rational`]
//! (arbitrary-precision) for identity checks that must vanish exactly.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// A commutative ring with identity.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse, if the element is a unit.
    fn try_inverse(&self) -> Option<Self>;

    /// Size of the element as a float: `|x|` for scalars, the largest
    /// coefficient magnitude for polynomials. Used for residual reporting.
    fn magnitude(&self) -> f64;
}

/// A field of numbers usable as polynomial coefficients and measure data.
pub trait Scalar: Ring + Div<Output = Self> + PartialOrd {
    /// True for exact arithmetic.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64(value: f64) -> Self;
    fn to_f64(&self) -> f64;

    fn from_int(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Parses `"p/q"`, an integer, or a decimal literal such as `"-0.25"` or
    /// `"1e-3"`. Decimal input is converted exactly in rational mode.
    fn parse(text: &str) -> Result<Self>;

    /// JSON form: a number for floats, a `"p/q"` string for rationals.
    fn to_json(&self) -> serde_json::Value;
}

impl Ring for f64 {
    fn try_inverse(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }

    fn magnitude(&self) -> f64 {
        f64::abs(*self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(value: f64) -> Self {
        value
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse(text: &str) -> Result<Self> {
        Ok(Scalar::to_f64(&parse_rational(text)?))
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self)
    }
}

impl Ring for Rational {
    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational::recip(self))
        }
    }

    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&Signed::abs(self)).unwrap_or(f64::INFINITY)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(value: f64) -> Self {
        Rational::from_float(value).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse(text: &str) -> Result<Self> {
        parse_rational(text)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
}

/// Parses a rational literal exactly. Accepts `p/q`, integers and decimals
/// with an optional exponent.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(text.to_string());
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_rational(num)?;
        let den = parse_rational(den)?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(num / den);
    }

    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (
            &text[..pos],
            text[pos + 1..].parse::<i32>().map_err(|_| bad())?,
        ),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Formats a rational as `"p/q"` (or `"p"` for integers).
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Largest magnitude among a collection of ring elements.
pub fn max_magnitude<'a, R: Ring + 'a>(items: impl IntoIterator<Item = &'a R>) -> f64 {
    items.into_iter().map(Ring::magnitude).fold(0.0, f64::max)
}
