//! Root finding: exact integer/rational roots by candidate enumeration, and
//! numeric complex roots through the companion matrix.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Rat;

/// Largest divisor-enumeration range we are willing to scan.
const MAX_SCAN: u64 = 50_000_000;

/// Integer coefficients of `c * p` for the smallest positive `c` clearing
/// all denominators.
fn integer_coeffs(p: &Poly) -> Vec<BigInt> {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs().iter().map(|c| (c * Rat::from_integer(lcm.clone())).to_integer()).collect()
}

/// Strip the `x^v` factor; returns the remaining coefficients (constant term nonzero).
fn strip_zero_roots(coeffs: Vec<BigInt>) -> Vec<BigInt> {
    let v = coeffs.iter().take_while(|c| c.is_zero()).count();
    coeffs[v..].to_vec()
}

/// Positive divisors of `n` that do not exceed `bound`, ascending.
fn divisors_up_to(n: &BigInt, bound: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    let root = n.sqrt();
    let limit = if &root < bound { root } else { bound.clone() };
    let scan = limit.to_u64().unwrap_or(u64::MAX);
    if scan > MAX_SCAN {
        return Err(Error::InvalidInput(format!("root candidate range too large ({scan})")));
    }
    let mut out = Vec::new();
    for d in 1..=scan {
        let d = BigInt::from(d);
        if (&n % &d).is_zero() {
            let co = &n / &d;
            if &co <= bound && co != d {
                out.push(co);
            }
            out.push(d);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Cauchy bound `1 + max |a_i / a_n|`, rounded up; every root has modulus below it.
fn cauchy_bound(coeffs: &[BigInt]) -> BigInt {
    let lead = coeffs.last().unwrap().abs();
    let max_ratio = coeffs[..coeffs.len() - 1]
        .iter()
        .map(|c| Rat::new(c.abs(), lead.clone()))
        .fold(Rat::zero(), |a, b| if b > a { b } else { a });
    max_ratio.ceil().to_integer() + 1
}

/// All positive integers `k` with `p(k) = 0`, ascending.
///
/// Candidates are the divisors of the constant term (after removing any
/// root at zero) bounded by the Cauchy root bound; each survivor is
/// confirmed by exact evaluation.
pub fn positive_integer_roots(p: &Poly) -> Result<Vec<u64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let coeffs = strip_zero_roots(integer_coeffs(p));
    if coeffs.len() < 2 {
        return Ok(Vec::new());
    }
    let bound = cauchy_bound(&coeffs);
    let mut roots = Vec::new();
    for d in divisors_up_to(&coeffs[0], &bound)? {
        let k = Rat::from_integer(d.clone());
        if p.eval(&k).is_zero() {
            roots.push(d.to_u64().ok_or_else(|| Error::InvalidInput("root exceeds u64".into()))?);
        }
    }
    Ok(roots)
}

/// All distinct rational roots of `p`, ascending.
pub fn rational_roots(p: &Poly) -> Result<Vec<Rat>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let raw = integer_coeffs(p);
    let has_zero = raw[0].is_zero() && raw.len() > 1;
    let coeffs = strip_zero_roots(raw);
    let mut roots = Vec::new();
    if has_zero {
        roots.push(Rat::zero());
    }
    if coeffs.len() >= 2 {
        let lead = coeffs.last().unwrap().abs();
        let bound = cauchy_bound(&coeffs) * &lead;
        let nums = divisors_up_to(&coeffs[0], &bound)?;
        let dens = divisors_up_to(&lead, &lead)?;
        for num in &nums {
            for den in &dens {
                for sign in [1i32, -1] {
                    let r = Rat::new(num * BigInt::from(sign), den.clone());
                    if p.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

/// Numeric roots of a polynomial given by `f64` coefficients (lowest first),
/// from the eigenvalues of its companion matrix.
pub fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|v| *v == 0.0) {
        c.pop();
    }
    let zeros_at_origin = c.iter().take_while(|v| **v == 0.0).count();
    let c = &c[zeros_at_origin.min(c.len())..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    if c.len() < 2 {
        return roots;
    }
    let deg = c.len() - 1;
    let lead = c[deg];
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lead;
    }
    roots.extend(m.complex_eigenvalues().iter().copied());
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    #[test]
    fn legendre_leading_factor() {
        // 30 - k(k+1)
        let p = Poly::from_i64(&[30, -1, -1]);
        assert_eq!(positive_integer_roots(&p).unwrap(), vec![5]);
    }

    #[test]
    fn no_real_roots() {
        assert!(positive_integer_roots(&Poly::from_i64(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn constructed_factors() {
        let p = Poly::from_roots(&[rat(2), rat(7)]);
        assert_eq!(positive_integer_roots(&p).unwrap(), vec![2, 7]);
        let q = Poly::from_roots(&[rat(0), rat(-3), rat(4), ratio(1, 2)]).scale(&ratio(5, 3));
        assert_eq!(positive_integer_roots(&q).unwrap(), vec![4]);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(positive_integer_roots(&Poly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn rational_roots_found() {
        let p = Poly::from_roots(&[ratio(-2, 3), rat(0), ratio(5, 2)]);
        assert_eq!(rational_roots(&p).unwrap(), vec![ratio(-2, 3), rat(0), ratio(5, 2)]);
        assert!(rational_roots(&Poly::from_i64(&[-2, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn companion_roots() {
        let mut r: Vec<f64> = complex_roots(&[2.0, -3.0, 1.0]).iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
        assert_eq!(complex_roots(&[0.0, 0.0, 1.0]).len(), 2);
    }
}
