//! Exact rational scalars.
//!
//! All coordinates, weights, thresholds, and ratios in this crate are
//! arbitrary-precision rationals. `num_rational::BigRational` already keeps
//! values in lowest terms with a positive denominator, which is exactly the
//! representation we need; this module adds construction and parsing helpers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

use crate::error::Error;
use crate::Result;

pub type Rational = BigRational;

/// Shorthand for a rational from two machine integers. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer-valued rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// `2^exp` as a rational, for integer `exp` of either sign.
pub fn pow2(exp: i64) -> Rational {
    let one = BigInt::one();
    if exp >= 0 {
        Rational::from_integer(one << exp as usize)
    } else {
        Rational::new(one.clone(), one << (-exp) as usize)
    }
}

/// Reduces `t` into `[0, 1)`.
pub fn mod1(t: &Rational) -> Rational {
    let f = t - t.floor();
    debug_assert!(!f.is_negative() && f < Rational::one());
    f
}

/// Parses `"p/q"`, `"p"`, or a plain decimal such as `"-3.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim())
            .map_err(|e| Error::Parse(format!("bad numerator {num:?}: {e}")))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|e| Error::Parse(format!("bad denominator {den:?}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part == "-" || int_part.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(int_part).map_err(|e| Error::Parse(format!("bad decimal {s:?}: {e}")))?
        };
        let frac = BigInt::from_str(frac_part)
            .map_err(|e| Error::Parse(format!("bad decimal {s:?}: {e}")))?;
        let scale = num::pow(BigInt::from(10), frac_part.len());
        let unsigned = int.abs() * &scale + frac;
        let n = if negative { -unsigned } else { unsigned };
        return Ok(Rational::new(n, scale));
    }
    let n = BigInt::from_str(s).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
    Ok(Rational::from_integer(n))
}

/// Renders a rational as `"p/q"` (always with denominator, in lowest terms).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Lossy decimal view for reports; exact values travel as `"p/q"` strings.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
