//! Exact rational quantities.
//!
//! Every number in the engine is an arbitrary-precision rational. Literals are
//! accepted as integers (`3`), decimals (`1.25`) or fractions (`5/4`) and are
//! always printed back in lowest terms as `p/q`, or as `p` when `q = 1`.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Signed exact rational used for preference information, weights and welfare values.
pub type Rational = BigRational;

/// Builds an integer-valued rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Builds `numer / denom`. Panics if `denom` is zero.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses a signed rational literal: `7`, `-2`, `0.125`, `3/8`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidQuantity(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((numer, denom)) = s.split_once('/') {
        let numer: BigInt = parse_integer(numer.trim()).ok_or_else(bad)?;
        let denom: BigInt = parse_integer(denom.trim()).ok_or_else(bad)?;
        if denom.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(numer, denom));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// A non-negative exact commodity quantity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Quantity(Rational);

impl Quantity {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::InvalidQuantity(format_rational(&value)));
        }
        Ok(Quantity(value))
    }

    pub fn zero() -> Self {
        Quantity(Rational::zero())
    }

    pub fn from_integer(value: u64) -> Self {
        Quantity(Rational::from_integer(BigInt::from(value)))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Subtraction that fails instead of leaving the non-negative orthant.
    pub fn checked_sub(&self, other: &Quantity) -> Option<Quantity> {
        let diff = &self.0 - &other.0;
        (!diff.is_negative()).then_some(Quantity(diff))
    }
}

impl From<u64> for Quantity {
    fn from(value: u64) -> Self {
        Quantity::from_integer(value)
    }
}

impl Add for &Quantity {
    type Output = Quantity;

    fn add(self, rhs: &Quantity) -> Quantity {
        Quantity(&self.0 + &rhs.0)
    }
}

impl Add for Quantity {
    type Output = Quantity;

    fn add(self, rhs: Quantity) -> Quantity {
        Quantity(self.0 + rhs.0)
    }
}

/// Signed difference of two quantities.
impl Sub for &Quantity {
    type Output = Rational;

    fn sub(self, rhs: &Quantity) -> Rational {
        &self.0 - &rhs.0
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value = parse_rational(s)?;
        Quantity::new(value).map_err(|_| Error::InvalidQuantity(s.to_string()))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}
