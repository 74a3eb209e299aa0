//! Truncated Laurent series at infinity.

use crate::scalar::Scalar;

/// `Σ_{t=1}^{T} c_t z^{-t}`, known exactly through the truncation order `T`.
///
/// Coefficients beyond `T` are unknown, not zero; every operation tracks the
/// order through which its result is still trustworthy.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentTail<S> {
    /// `coeffs[t - 1]` multiplies `z^{-t}`.
    coeffs: Vec<S>,
}

impl<S: Scalar> LaurentTail<S> {
    /// Series whose coefficients, from `z^{-1}` on, are `coeffs`; the
    /// truncation order is `coeffs.len()`.
    pub fn new(coeffs: Vec<S>) -> Self {
        LaurentTail { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        LaurentTail { coeffs: vec![S::zero(); order] }
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len()
    }

    /// Power of the first nonzero term (`z^{-start}`), `None` if all known
    /// coefficients vanish.
    pub fn start_power(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| i + 1)
    }

    /// Coefficient of `z^{-t}`; `None` beyond the truncation order.
    pub fn coeff(&self, t: usize) -> Option<&S> {
        if t == 0 {
            return None;
        }
        self.coeffs.get(t - 1)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.truncation_order().min(other.truncation_order());
        LaurentTail::new((0..order).map(|i| self.coeffs[i].clone() + other.coeffs[i].clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.truncation_order().min(other.truncation_order());
        LaurentTail::new((0..order).map(|i| self.coeffs[i].clone() - other.coeffs[i].clone()).collect())
    }

    pub fn scale(&self, c: &S) -> Self {
        LaurentTail::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Term-wise `d/dz`; the truncation order grows by one.
    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(S::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            let t = (i + 1) as i64;
            out.push(-(c.clone() * S::from_i64(t)));
        }
        LaurentTail::new(out)
    }

    /// Multiply by `z^shift`. Terms that land on `z^0` or higher go to the
    /// returned polynomial part (lowest power first).
    pub fn mul_z_power(&self, shift: usize) -> Expansion<S> {
        let mut polynomial = vec![S::zero(); shift];
        let mut tail = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let t = i + 1;
            if t <= shift {
                polynomial[shift - t] = c.clone();
            } else {
                tail.push(c.clone());
            }
        }
        Expansion { polynomial, tail: LaurentTail::new(tail) }
    }

    /// Multiply by `z^{-shift}`; the truncation order grows by `shift`.
    pub fn div_z_power(&self, shift: usize) -> Self {
        let mut out = vec![S::zero(); shift];
        out.extend(self.coeffs.iter().cloned());
        LaurentTail::new(out)
    }
}

/// Laurent expansion at infinity with a finite polynomial part:
/// `Σ_i polynomial[i] z^i + tail`.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion<S> {
    pub polynomial: Vec<S>,
    pub tail: LaurentTail<S>,
}

impl<S: Scalar> Expansion<S> {
    pub fn zero(order: usize) -> Self {
        Expansion { polynomial: Vec::new(), tail: LaurentTail::zero(order) }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.polynomial.len().max(other.polynomial.len());
        let at = |v: &Vec<S>, i: usize| v.get(i).cloned().unwrap_or_else(S::zero);
        let mut polynomial: Vec<S> = (0..n).map(|i| at(&self.polynomial, i) + at(&other.polynomial, i)).collect();
        while polynomial.last().is_some_and(|c| c.is_zero()) {
            polynomial.pop();
        }
        Expansion { polynomial, tail: self.tail.add(&other.tail) }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut polynomial: Vec<S> = self.polynomial.iter().map(|a| a.clone() * c.clone()).collect();
        while polynomial.last().is_some_and(|c| c.is_zero()) {
            polynomial.pop();
        }
        Expansion { polynomial, tail: self.tail.scale(c) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio, Rat};

    #[test]
    fn transcription_and_start() {
        let s = LaurentTail::new(vec![rat(1), ratio(1, 2), ratio(1, 3)]);
        assert_eq!(s.start_power(), Some(1));
        assert_eq!(s.truncation_order(), 3);
        assert_eq!(s.coeff(2), Some(&ratio(1, 2)));
        assert_eq!(s.coeff(4), None);
        assert_eq!(LaurentTail::<Rat>::zero(5).start_power(), None);
    }

    #[test]
    fn derivative_of_inverse() {
        let s = LaurentTail::new(vec![rat(1)]);
        let d = s.derivative();
        assert_eq!(d.coeffs(), &[rat(0), rat(-1)]);
    }

    #[test]
    fn shifting_splits_polynomial_part() {
        let s = LaurentTail::new(vec![rat(1), rat(2), rat(3)]);
        let e = s.mul_z_power(2);
        // z^2 (z^-1 + 2 z^-2 + 3 z^-3) = z + 2 + 3 z^-1
        assert_eq!(e.polynomial, vec![rat(2), rat(1)]);
        assert_eq!(e.tail.coeffs(), &[rat(3)]);
        assert_eq!(s.div_z_power(1).coeffs(), &[rat(0), rat(1), rat(2), rat(3)]);
    }
}
