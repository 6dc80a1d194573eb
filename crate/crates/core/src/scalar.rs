//! Scalar abstraction shared by the linear-programming and measure code.
//!
//! Exact types report a zero tolerance, so every comparison they take part in
//! is decided exactly. Floating-point types carry a small pivot tolerance and
//! are only used for cross-checks and display.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
    /// Magnitude below which a value is treated as zero.
    fn tolerance() -> Self;

    fn is_negligible(&self) -> bool {
        self.abs() <= Self::tolerance()
    }

    fn is_positive_strict(&self) -> bool {
        *self > Self::tolerance()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).unwrap() / Self::from_i64(den).unwrap()
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-11
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }
}

impl Scalar for BigRational {
    fn tolerance() -> Self {
        BigRational::zero()
    }
}

impl Scalar for Ratio<i64> {
    fn tolerance() -> Self {
        Ratio::zero()
    }
}

/// Parses `"a/b"` or `"a"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim().trim_matches('"');
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::parse("rational", format!("bad numerator in {text:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::parse("rational", format!("bad denominator in {text:?}")))?;
    if den.is_zero() {
        return Err(Error::parse(
            "rational",
            format!("zero denominator in {text:?}"),
        ));
    }
    Ok(BigRational::new(num, den))
}

/// Formats a rational as `"a/b"`, always with an explicit denominator.
pub fn format_rational(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `1 / 2^i` as an exact rational.
pub fn dyadic(i: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << i as usize)
}

/// Exact rational image of a finite float.
pub fn from_f64(value: f64) -> BigRational {
    BigRational::from_float(value).unwrap_or_else(BigRational::zero)
}
