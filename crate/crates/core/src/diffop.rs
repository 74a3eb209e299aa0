//! Linear differential operators `L = Σ_{j=0}^{n} p_j(x) ∂^j` with rational
//! polynomial coefficients.
//!
//! Besides construction, adjoint and application this module derives the
//! data that drives the moment recurrence: the degree profile `α_j = d_j - j`,
//! the recurrence coefficient polynomials `q_ℓ(k)`, the cap `Λ` on positive
//! integer zeros of the leading `q_α`, and the indicial analysis at infinity.

use std::fmt;

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::{complex_roots, positive_integer_roots, rational_roots};
use crate::scalar::{binomial_s, parse_rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    coeffs: Vec<Poly>,
}

/// Degree profile `α_j = deg p_j - j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaProfile {
    /// `None` where `p_j` is the zero polynomial.
    pub alphas: Vec<Option<i64>>,
    /// Maximum over the nonzero coefficients.
    pub alpha: i64,
}

/// A characteristic exponent at infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum Exponent {
    Rational(Rat),
    /// Irrational or complex root, double-precision estimate only.
    Approximate(Complex64),
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rational(r) => write!(f, "{r}"),
            Exponent::Approximate(z) if z.im == 0.0 => write!(f, "~{:.12}", z.re),
            Exponent::Approximate(z) => write!(f, "~{:.12}{:+.12}i", z.re, z.im),
        }
    }
}

/// Indicial data at the point at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct InfinityAnalysis {
    /// `α_n >= α_j` for every nonzero `p_j`.
    pub fuchsian: bool,
    /// `q_{α_n}(s - 1)` as a polynomial in `s`.
    pub indicial: Poly,
    /// Roots of `indicial`, each listed once; rational roots are exact.
    pub exponents: Vec<Exponent>,
    /// Positive integer exponents, ascending.
    pub integer_exponents: Vec<u64>,
    /// Largest positive integer exponent.
    pub lambda: Option<u64>,
}

impl DiffOperator {
    /// `coeffs[j]` is `p_j`; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidOrder);
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        Ok(DiffOperator { coeffs })
    }

    /// Convenience constructor from integer coefficient tables.
    pub fn from_i64(table: &[&[i64]]) -> Result<Self> {
        DiffOperator::new(table.iter().map(|c| Poly::from_i64(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// `p_j`.
    pub fn coeff(&self, j: usize) -> &Poly {
        &self.coeffs[j]
    }

    pub fn leading(&self) -> &Poly {
        &self.coeffs[self.order()]
    }

    /// `a_{i,j}`: coefficient of `x^i` in `p_j`, zero outside the table.
    pub fn a(&self, i: i64, j: i64) -> Rat {
        if i < 0 || j < 0 || j as usize > self.order() {
            return Rat::zero();
        }
        self.coeffs[j as usize].coeff(i as usize)
    }

    /// `d_n = deg p_n`.
    pub fn leading_degree(&self) -> usize {
        self.leading().degree().unwrap()
    }

    /// Formal adjoint `L* v = Σ_j (-1)^j ∂^j (p_j v)`, expanded by Leibniz.
    pub fn adjoint(&self) -> DiffOperator {
        let n = self.order();
        let coeffs = (0..=n)
            .map(|t| {
                (t..=n).fold(Poly::zero(), |acc, j| {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    let c: Rat = binomial_s::<Rat>(j, t) * crate::scalar::rat(sign);
                    &acc + &self.coeffs[j].derivative(j - t).scale(&c)
                })
            })
            .collect();
        DiffOperator { coeffs }
    }

    /// `Σ_j p_j u^{(j)}`.
    pub fn apply(&self, u: &Poly) -> Poly {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (j, p)| &acc + &(p * &u.derivative(j)))
    }

    pub fn alpha_profile(&self) -> AlphaProfile {
        let alphas: Vec<Option<i64>> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, p)| p.degree().map(|d| d as i64 - j as i64))
            .collect();
        let alpha = alphas.iter().flatten().copied().max().expect("p_n is nonzero");
        AlphaProfile { alphas, alpha }
    }

    pub fn alpha(&self) -> i64 {
        self.alpha_profile().alpha
    }

    /// `q_ℓ(k) = Σ_j (-1)^j a_{ℓ+j,j} (k+ℓ+j)_j`, for `ℓ ∈ [-n, α]`.
    pub fn q_poly(&self, ell: i64) -> Result<Poly> {
        let n = self.order() as i64;
        let alpha = self.alpha();
        if ell < -n || ell > alpha {
            return Err(Error::Range { ell, lo: -n, hi: alpha });
        }
        Ok(self.q_poly_unchecked(ell))
    }

    fn q_poly_unchecked(&self, ell: i64) -> Poly {
        (0..=self.order() as i64).fold(Poly::zero(), |acc, j| {
            let a = self.a(ell + j, j);
            if a.is_zero() {
                return acc;
            }
            let a = if j % 2 == 0 { a } else { -a };
            &acc + &Poly::falling_factorial(ell + j, j as usize).scale(&a)
        })
    }

    /// All `(ℓ, q_ℓ)` for `ℓ = -n ..= α`.
    pub fn q_polys(&self) -> Vec<(i64, Poly)> {
        let n = self.order() as i64;
        (-n..=self.alpha()).map(|l| (l, self.q_poly_unchecked(l))).collect()
    }

    /// Positive integer zeros of the leading coefficient `q_α`.
    pub fn leading_integer_zeros(&self) -> Result<Vec<u64>> {
        let q = self.q_poly_unchecked(self.alpha());
        if q.is_zero() {
            return Err(Error::DegenerateLeading);
        }
        positive_integer_roots(&q)
    }

    /// `Λ`: the largest positive integer zero of `q_α`, or 0 when there is none.
    pub fn lambda_cap(&self) -> Result<u64> {
        Ok(self.leading_integer_zeros()?.last().copied().unwrap_or(0))
    }

    pub fn is_fuchsian(&self) -> bool {
        let profile = self.alpha_profile();
        let top = profile.alphas[self.order()].unwrap();
        profile.alphas.iter().flatten().all(|&a| a <= top)
    }

    pub fn infinity_analysis(&self) -> InfinityAnalysis {
        let n = self.order();
        let alpha_n = self.leading_degree() as i64 - n as i64;
        // q_{α_n} always carries the j = n term, so it has degree exactly n.
        let indicial = self.q_poly_unchecked(alpha_n).shift(&crate::scalar::rat(-1));
        let rational = rational_roots(&indicial).unwrap_or_default();
        let mut deflated = indicial.clone();
        for r in &rational {
            let factor = Poly::new(vec![-r.clone(), Rat::from_integer(1.into())]);
            while !deflated.is_zero() && deflated.degree().unwrap() > 0 && deflated.eval(r).is_zero() {
                deflated = deflated.div_rem(&factor).0;
            }
        }
        let mut exponents: Vec<Exponent> = rational.iter().cloned().map(Exponent::Rational).collect();
        let mut approx = complex_roots(&deflated.to_f64());
        approx.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        exponents.extend(approx.into_iter().map(Exponent::Approximate));
        let integer_exponents: Vec<u64> = rational
            .iter()
            .filter(|r| r.is_integer() && r.is_positive())
            .map(|r| r.to_integer().try_into().expect("exponent fits u64"))
            .collect();
        let lambda = integer_exponents.last().copied();
        InfinityAnalysis { fuchsian: self.is_fuchsian(), indicial, exponents, integer_exponents, lambda }
    }

    /// Parse the `p_j: c_0 c_1 ...` text format. Missing `p_j` lines are zero.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(usize, Poly)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::Parse(format!("operator line {}: {m}", lineno + 1));
            let (head, body) = line.split_once(':').ok_or_else(|| err("expected `p_j: ...`"))?;
            let j: usize = head
                .trim()
                .strip_prefix('p')
                .map(|s| s.strip_prefix('_').unwrap_or(s))
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("bad coefficient label"))?;
            if entries.iter().any(|(k, _)| *k == j) {
                return Err(err("duplicate coefficient"));
            }
            let coeffs = body.split_whitespace().map(parse_rat).collect::<Result<Vec<_>>>()?;
            entries.push((j, Poly::new(coeffs)));
        }
        let n = entries.iter().map(|(j, _)| *j).max().ok_or_else(|| Error::Parse("empty operator".into()))?;
        let mut coeffs = vec![Poly::zero(); n + 1];
        for (j, p) in entries {
            coeffs[j] = p;
        }
        DiffOperator::new(coeffs)
    }

    /// Inverse of [`DiffOperator::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (j, p) in self.coeffs.iter().enumerate() {
            let body = if p.is_zero() {
                "0".to_string()
            } else {
                p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
            };
            out.push_str(&format!("p_{j}: {body}\n"));
        }
        out
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, p) in self.coeffs.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            let d = match j {
                0 => String::new(),
                1 => "∂".to_string(),
                _ => format!("∂^{j}"),
            };
            parts.push(if d.is_empty() { format!("({p})") } else { format!("({p}){d}") });
        }
        f.write_str(&parts.join(" + "))
    }
}
