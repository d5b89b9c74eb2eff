//! Exact rational numbers and their string form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"n"` or `"p/q"`, with an optional leading minus sign.
pub fn parse(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let err = || Error::ParseRational(text.to_string());
    if trimmed.is_empty() || trimmed.starts_with('+') {
        return Err(err());
    }
    let (num, den) = match trimmed.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (trimmed, "1"),
    };
    if den.starts_with('-') || den.starts_with('+') {
        return Err(err());
    }
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical string form: `"n"` for integers, `"p/q"` in lowest terms otherwise.
pub fn format(value: &Rational) -> String {
    value.to_string()
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational value of a finite double.
pub fn from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

/// Smallest integer not below `value`.
pub fn ceil_to_u64(value: &Rational) -> Option<u64> {
    value.ceil().to_integer().to_u64()
}
