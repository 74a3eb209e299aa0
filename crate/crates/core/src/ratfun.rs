//! Rational functions regular at infinity, kept in partial-fraction form.

use std::fmt;

use crate::laurent::LaurentTail;
use crate::scalar::{binomial_s, powu, Scalar};

/// `Σ_j Σ_ℓ terms[j][ℓ] / (z - poles[j])^{ℓ+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFun<S> {
    pub poles: Vec<S>,
    pub terms: Vec<Vec<S>>,
}

impl<S: Scalar> RatFun<S> {
    pub fn new(poles: Vec<S>, terms: Vec<Vec<S>>) -> Self {
        assert_eq!(poles.len(), terms.len(), "one term list per pole");
        RatFun { poles, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().flatten().all(|c| c.is_zero())
    }

    /// Coefficient of `z^{-k-1}` in the expansion at infinity.
    ///
    /// Uses `(z - ξ)^{-(ℓ+1)} = Σ_{k≥ℓ} C(k, ℓ) ξ^{k-ℓ} z^{-k-1}`.
    pub fn expansion_coeff(&self, k: usize) -> S {
        let mut acc = S::zero();
        for (xi, terms) in self.poles.iter().zip(&self.terms) {
            for (l, c) in terms.iter().enumerate() {
                if c.is_zero() || k < l {
                    continue;
                }
                acc = acc + c.clone() * binomial_s::<S>(k, l) * powu(xi, (k - l) as u64);
            }
        }
        acc
    }

    /// Expansion at infinity through `z^{-order}`.
    pub fn laurent(&self, order: usize) -> LaurentTail<S> {
        LaurentTail::new((0..order).map(|k| self.expansion_coeff(k)).collect())
    }
}

impl<S: Scalar> fmt::Display for RatFun<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (xi, terms) in self.poles.iter().zip(&self.terms) {
            for (l, c) in terms.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let base = if xi.is_zero() { "z".to_string() } else { format!("(z - {xi})") };
                let den = if l == 0 { base } else { format!("{base}^{}", l + 1) };
                parts.push(format!("({c})/{den}"));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    #[test]
    fn double_pole_expansion() {
        // 1/(z-2)^2 = Σ k 2^{k-1} z^{-k-1}
        let g = RatFun::new(vec![rat(2)], vec![vec![rat(0), rat(1)]]);
        let got: Vec<Rat> = (0..5).map(|k| g.expansion_coeff(k)).collect();
        assert_eq!(got, vec![rat(0), rat(1), rat(4), rat(12), rat(32)]);
    }

    #[test]
    fn zero_function() {
        let g: RatFun<Rat> = RatFun::new(vec![rat(1)], vec![vec![rat(0)]]);
        assert!(g.is_zero());
        assert_eq!(g.to_string(), "0");
    }
}
