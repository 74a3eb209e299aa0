//! Scalar fields used throughout the crate.
//!
//! Verification paths run over [`Rat`] (exact arbitrary-precision rationals);
//! the reconstruction pipeline runs over `f64`. Everything that must work in
//! both modes is generic over [`Scalar`].

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rat = BigRational;

/// A field element the generic algorithms can compute with.
pub trait Scalar:
    Num + Neg<Output = Self> + PartialOrd + Clone + Debug + Display + Send + Sync + 'static
{
    fn from_rat(r: &Rat) -> Self;

    fn from_i64(v: i64) -> Self;

    /// Approximate absolute value, used for pivot selection and reporting.
    fn magnitude(&self) -> f64;

    fn to_f64(&self) -> f64;

    /// Whether arithmetic in this field is exact.
    fn is_exact() -> bool;
}

impl Scalar for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn from_i64(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }

    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn from_rat(r: &Rat) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_exact() -> bool {
        false
    }
}

/// `x^e` by repeated squaring; `x^0 = 1` for every `x`, including zero.
pub fn powu<S: Scalar>(x: &S, mut e: u64) -> S {
    let mut base = x.clone();
    let mut acc = S::one();
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

/// Falling factorial `(x)_j = x (x-1) ... (x-j+1)` for an integer argument.
///
/// Zero whenever `0 <= x < j`; for negative `x` the plain product is returned.
pub fn falling(x: i64, j: usize) -> i128 {
    let mut acc: i128 = 1;
    for t in 0..j as i64 {
        acc *= (x - t) as i128;
    }
    acc
}

/// Falling factorial lifted into a scalar field.
pub fn falling_s<S: Scalar>(x: i64, j: usize) -> S {
    let mut acc = S::one();
    for t in 0..j as i64 {
        acc = acc * S::from_i64(x - t);
    }
    acc
}

/// Binomial coefficient as a scalar.
pub fn binomial_s<S: Scalar>(n: usize, k: usize) -> S {
    if k > n {
        return S::zero();
    }
    let mut acc = Rat::one();
    for t in 0..k {
        acc = acc * Rat::from_integer(BigInt::from(n - t)) / Rat::from_integer(BigInt::from(t + 1));
    }
    S::from_rat(&acc)
}

pub fn factorial_s<S: Scalar>(n: usize) -> S {
    falling_s(n as i64, n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse a rational literal.
///
/// Accepts `p/q`, plain integers, and decimals with an optional exponent
/// (`-1.25`, `3e-4`). Decimals are converted exactly, so `0.1` is `1/10`.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid rational literal `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str_radix(n.trim().trim_start_matches('+'), 10).map_err(|_| bad())?;
        let d = BigInt::from_str_radix(d.trim().trim_start_matches('+'), 10).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{text}`")));
        }
        return Ok(Rat::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].trim_start_matches('+').parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
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
    let mut value = Rat::from_integer(BigInt::from_str_radix(&all_digits, 10).map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i64;
    let ten = rat(10);
    if shift.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    if shift >= 0 {
        value *= powu(&ten, shift as u64);
    } else {
        value /= powu(&ten, (-shift) as u64);
    }
    Ok(if negative { -value } else { value })
}

/// Parse a scalar literal in the requested field.
pub fn parse_scalar<S: Scalar>(text: &str) -> Result<S> {
    if !S::is_exact() {
        if let Ok(v) = text.trim().parse::<f64>() {
            // f64 -> Rat is exact, so the value survives the trip unchanged.
            return Rat::from_float(v)
                .map(|r| S::from_rat(&r))
                .ok_or_else(|| Error::Parse(format!("non-finite literal `{text}`")));
        }
    }
    parse_rat(text).map(|r| S::from_rat(&r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rat("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rat("-7").unwrap(), rat(-7));
        assert_eq!(parse_rat("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_rat("-1.5e2").unwrap(), rat(-150));
        assert_eq!(parse_rat("25e-2").unwrap(), ratio(1, 4));
        assert_eq!(parse_rat(".5").unwrap(), ratio(1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn float_literals_round_trip() {
        let v: f64 = parse_scalar("1.7182818284590453").unwrap();
        assert_eq!(v, 1.718_281_828_459_045_3);
        let w: f64 = parse_scalar("2/3").unwrap();
        assert_eq!(w, 2.0 / 3.0);
    }

    #[test]
    fn falling_factorial_conventions() {
        assert_eq!(falling(5, 0), 1);
        assert_eq!(falling(5, 2), 20);
        assert_eq!(falling(1, 2), 0);
        assert_eq!(falling(0, 1), 0);
        assert_eq!(powu(&0.0_f64, 0), 1.0);
        assert_eq!(powu(&rat(2), 10), rat(1024));
    }
}
