//! Exact rational helpers.
//!
//! Every quantity the orientation engine compares (edge values, potentials,
//! gaps, growth bounds) is a [`Rational`]. Nothing in the pipeline touches
//! floating point.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serializer;

pub type Rational = num_rational::BigRational;

/// `n / 1`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics when `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Ceiling as a machine integer. Values in this crate are bounded by vertex
/// degrees, so the conversion never overflows in practice.
pub fn ceil_i64(x: &Rational) -> i64 {
    x.ceil()
        .to_integer()
        .to_i64()
        .expect("rational ceiling out of i64 range")
}

pub fn floor_i64(x: &Rational) -> i64 {
    x.floor()
        .to_integer()
        .to_i64()
        .expect("rational floor out of i64 range")
}

pub fn is_strictly_between_zero_and_one(x: &Rational) -> bool {
    x.is_positive() && *x < Rational::one()
}

/// `t^-e` for positive `t`.
pub fn inverse_power(t: i64, e: u32) -> Rational {
    let den = BigInt::from(t).pow(e);
    Rational::new(BigInt::one(), den)
}

/// Formats as `num/den` (or just `num` when integral).
pub fn display(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `num/den` or a bare integer.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub(crate) fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&display(x))
}

pub(crate) fn serialize_opt_vec<S: Serializer>(xs: &[Option<Rational>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.as_ref().map(display))?;
    }
    seq.end()
}
