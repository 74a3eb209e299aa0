//! Power-series solutions of `L u = 0` at ordinary points.
//!
//! With `u = Σ b_t (x - x0)^t` and `p_j = Σ_i P_{i,j} (x - x0)^i`, the
//! coefficient of `(x - x0)^s` in `L u` is
//! `Σ_j Σ_{i≤s} P_{i,j} (s-i+j)_j b_{s-i+j}`, which is solved for `b_{s+n}`.

use num_complex::Complex64;

use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::roots::complex_roots;
use crate::scalar::{binomial_s, factorial_s, falling_s, powu, Scalar};

/// Coefficients of `p_j` re-expanded around `x0`: `shifted[j][i] = p_j^{(i)}(x0) / i!`.
fn shifted_coeffs<S: Scalar>(op: &DiffOperator, x0: &S) -> Vec<Vec<S>> {
    op.coeffs()
        .iter()
        .map(|p| {
            let d = p.degree().map_or(0, |d| d + 1);
            (0..d)
                .map(|i| {
                    (i..d).fold(S::zero(), |acc, m| {
                        acc + S::from_rat(&p.coeff(m)) * binomial_s::<S>(m, i) * powu(x0, (m - i) as u64)
                    })
                })
                .collect()
        })
        .collect()
}

/// Taylor coefficients `b_0 ..= b_degree` of the solution with
/// `u^{(t)}(x0) = ic[t]` for `t < n`.
pub fn taylor_coeffs<S: Scalar>(op: &DiffOperator, x0: &S, ic: &[S], degree: usize) -> Result<Vec<S>> {
    let n = op.order();
    if ic.len() != n {
        return Err(Error::InvalidInput(format!("initial vector has length {}, expected {n}", ic.len())));
    }
    let shifted = shifted_coeffs(op, x0);
    let lead = shifted[n].first().cloned().unwrap_or_else(S::zero);
    if lead.is_zero() {
        return Err(Error::SingularExpansionPoint { a: x0.to_string(), b: x0.to_string() });
    }
    let mut b: Vec<S> = ic.iter().enumerate().map(|(t, v)| v.clone() / factorial_s::<S>(t)).collect();
    let mut s = 0usize;
    while b.len() <= degree {
        let mut acc = S::zero();
        for (j, pj) in shifted.iter().enumerate() {
            for (i, c) in pj.iter().enumerate().take(s + 1) {
                if (i, j) == (0, n) || c.is_zero() {
                    continue;
                }
                let idx = s - i + j;
                acc = acc + c.clone() * falling_s::<S>(idx as i64, j) * b[idx].clone();
            }
        }
        b.push(-acc / (lead.clone() * falling_s::<S>((s + n) as i64, n)));
        s += 1;
    }
    b.truncate(degree + 1);
    Ok(b)
}

/// `u^{(r)}(x0 + h)` for `r < count`, from Taylor coefficients.
pub fn eval_derivatives(b: &[f64], h: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|r| {
            let mut acc = 0.0;
            for t in (r..b.len()).rev() {
                let mut f = 1.0;
                for q in 0..r {
                    f *= (t - q) as f64;
                }
                acc = acc * h + f * b[t];
            }
            acc
        })
        .collect()
}

/// Horner evaluation of `Σ b_t h^t`.
pub fn eval_series(b: &[f64], h: f64) -> f64 {
    b.iter().rev().fold(0.0, |acc, c| acc * h + c)
}

/// Complex roots of `p_n` in double precision.
pub fn leading_roots(op: &DiffOperator) -> Vec<Complex64> {
    complex_roots(&op.leading().to_f64())
}

/// Whether `p_n` has a real root in `[a, b]`, checked in floating point with a
/// small relative margin.
pub fn leading_vanishes_on(roots: &[Complex64], a: f64, b: f64) -> bool {
    let margin = 1e-12 * (1.0 + a.abs().max(b.abs()));
    roots.iter().any(|z| z.im.abs() <= margin * 1e3 && z.re >= a - margin && z.re <= b + margin)
}

/// Taylor degree used for each propagation step.
pub const STEP_DEGREE: usize = 40;

/// Solution state carried across a piece by overlapping Taylor steps, each no
/// longer than half the distance to the nearest complex root of `p_n`.
pub struct Propagator<'a> {
    op: &'a DiffOperator,
    roots: Vec<Complex64>,
    max_step: f64,
}

impl<'a> Propagator<'a> {
    pub fn new(op: &'a DiffOperator) -> Self {
        Propagator { op, roots: leading_roots(op), max_step: 0.25 }
    }

    fn step_from(&self, x: f64) -> f64 {
        let dist = self
            .roots
            .iter()
            .map(|z| (Complex64::new(x, 0.0) - z).norm())
            .fold(f64::INFINITY, f64::min);
        (0.5 * dist).min(self.max_step)
    }

    /// Evaluate the solution with derivative vector `state` at `x0` on the
    /// sorted points `xs ⊂ [x0, x1]`, and return the derivative vector at `x1`.
    pub fn sweep(&self, x0: f64, state: &[f64], x1: f64, xs: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        if leading_vanishes_on(&self.roots, x0, x1) {
            return Err(Error::SingularExpansionPoint { a: x0.to_string(), b: x1.to_string() });
        }
        let n = self.op.order();
        let mut x = x0;
        let mut v = state.to_vec();
        let mut values = Vec::with_capacity(xs.len());
        let mut next = 0;
        loop {
            let h = self.step_from(x);
            let end = if x + h >= x1 { x1 } else { x + h };
            let b = taylor_coeffs(self.op, &x, &v, STEP_DEGREE)?;
            while next < xs.len() && xs[next] <= end {
                values.push(eval_series(&b, xs[next] - x));
                next += 1;
            }
            v = eval_derivatives(&b, end - x, n);
            x = end;
            if x >= x1 {
                break;
            }
        }
        Ok((values, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio, Rat};

    #[test]
    fn exponential_coefficients() {
        let op = DiffOperator::from_i64(&[&[-1], &[1]]).unwrap();
        let b = taylor_coeffs(&op, &rat(0), &[rat(1)], 5).unwrap();
        assert_eq!(b, vec![rat(1), rat(1), ratio(1, 2), ratio(1, 6), ratio(1, 24), ratio(1, 120)]);
    }

    #[test]
    fn polynomial_solution_terminates() {
        // Legendre P_2 around x0 = 1/2: value -1/8, slope 3/2.
        let op = DiffOperator::from_i64(&[&[6], &[0, -2], &[1, 0, -1]]).unwrap();
        let b: Vec<Rat> = taylor_coeffs(&op, &ratio(1, 2), &[ratio(-1, 8), ratio(3, 2)], 6).unwrap();
        assert_eq!(&b[..3], &[ratio(-1, 8), ratio(3, 2), ratio(3, 2)]);
        assert!(b[3..].iter().all(|c| *c == rat(0)));
    }

    #[test]
    fn singular_start_rejected() {
        let op = DiffOperator::from_i64(&[&[-1], &[0, 1]]).unwrap();
        assert!(matches!(taylor_coeffs(&op, &0.0, &[1.0], 4), Err(Error::SingularExpansionPoint { .. })));
    }

    #[test]
    fn propagated_cosine() {
        let op = DiffOperator::from_i64(&[&[1], &[], &[1]]).unwrap();
        let prop = Propagator::new(&op);
        let xs = [0.0, 1.0, 2.5];
        let (vals, end) = prop.sweep(0.0, &[1.0, 0.0], 3.0, &xs).unwrap();
        for (x, v) in xs.iter().zip(&vals) {
            assert!((v - x.cos()).abs() < 1e-13);
        }
        assert!((end[1] + 3f64.sin()).abs() < 1e-13);
    }
}
