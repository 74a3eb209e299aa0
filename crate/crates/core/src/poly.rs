//! Dense univariate polynomials over exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::{rat, Rat, Scalar};

/// Polynomial with coefficients stored lowest power first.
///
/// The highest stored coefficient is always nonzero; the zero polynomial is
/// the empty list and has no degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::from_i64(&[0, 1])
    }

    /// `c * x^d`.
    pub fn monomial(c: Rat, d: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); d + 1];
        coeffs[d] = c;
        Poly::new(coeffs)
    }

    /// Monic polynomial with the given roots, each listed once per multiplicity.
    pub fn from_roots(roots: &[Rat]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| &acc * &Poly::new(vec![-r.clone(), Rat::one()]))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the stored range.
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation in another scalar field.
    pub fn eval_as<S: Scalar>(&self, x: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + S::from_rat(c))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.eval_as(&x)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `r`-th derivative.
    pub fn derivative(&self, r: usize) -> Poly {
        if r == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(r)
            .map(|(i, c)| c * Rat::from_integer(crate::scalar::falling(i as i64, r).into()))
            .collect();
        Poly::new(coeffs)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rat::zero());
        coeffs.extend(self.coeffs.iter().enumerate().map(|(i, c)| c / rat(i as i64 + 1)));
        Poly::new(coeffs)
    }

    /// Exact definite integral over `[a, b]`.
    pub fn integrate(&self, a: &Rat, b: &Rat) -> Rat {
        let prim = self.antiderivative();
        prim.eval(b) - prim.eval(a)
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &Rat) -> Poly {
        let step = Poly::new(vec![c.clone(), Rat::one()]);
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, a| &(&acc * &step) + &Poly::constant(a.clone()))
    }

    /// Multiply by `x^d`.
    pub fn shl(&self, d: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); d];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::new(coeffs)
    }

    /// The falling factorial `(k + c)_j` as a polynomial in `k`.
    pub fn falling_factorial(c: i64, j: usize) -> Poly {
        (0..j as i64).fold(Poly::one(), |acc, t| &acc * &Poly::new(vec![rat(c - t), Rat::one()]))
    }

    /// Euclidean division, `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            let shift = top - dd;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = &rem[shift + i] - &c * d;
            }
            quot[shift] = c;
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Number of distinct real roots in the closed interval `[a, b]`, exact
    /// (Sturm sequence).
    pub fn count_real_roots_in(&self, a: &Rat, b: &Rat) -> usize {
        assert!(a <= b, "empty interval");
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        // Deflate roots sitting on the endpoints so Sturm sees nonzero values there.
        let mut p = self.clone();
        let mut on_ends = 0;
        for end in [a, b] {
            if p.degree().unwrap_or(0) > 0 && p.eval(end).is_zero() {
                on_ends += 1;
                let factor = Poly::new(vec![-end.clone(), Rat::one()]);
                while p.degree().unwrap_or(0) > 0 && p.eval(end).is_zero() {
                    p = p.div_rem(&factor).0;
                }
            }
        }
        if a == b || p.degree().unwrap_or(0) == 0 {
            return on_ends.min(if a == b { 1 } else { 2 });
        }
        let mut seq = vec![p.clone(), p.derivative(1)];
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        let sign_changes = |x: &Rat| {
            let signs: Vec<bool> = seq
                .iter()
                .map(|p| p.eval(x))
                .filter(|v| !v.is_zero())
                .map(|v| v.is_positive())
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        sign_changes(a) - sign_changes(b) + on_ends
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }

    /// Render with the given variable name, highest power first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use proptest::prelude::*;

    #[test]
    fn difference_of_squares() {
        let a = Poly::from_i64(&[1, 1]);
        let b = Poly::from_i64(&[-1, 1]);
        assert_eq!(&a * &b, Poly::from_i64(&[-1, 0, 1]));
        let p = Poly::from_i64(&[1, 0, -1]);
        assert_eq!(&p + &Poly::zero(), p);
        assert_eq!(&p * &Poly::one(), p);
    }

    #[test]
    fn derivatives() {
        let p = Poly::from_i64(&[1, 0, -1]);
        assert_eq!(p.derivative(1), Poly::from_i64(&[0, -2]));
        assert_eq!(Poly::from_i64(&[0, 0, 0, 1]).derivative(2), Poly::from_i64(&[0, 6]));
        assert!(p.derivative(3).is_zero());
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Poly::new(vec![rat(0), rat(0)]).degree(), None);
        assert_eq!(Poly::from_i64(&[3]).degree(), Some(0));
    }

    #[test]
    fn shift_and_integrate() {
        let p = Poly::from_i64(&[0, 0, 1]);
        assert_eq!(p.shift(&rat(1)), Poly::from_i64(&[1, 2, 1]));
        assert_eq!(p.integrate(&rat(0), &rat(1)), ratio(1, 3));
    }

    #[test]
    fn division_identity() {
        let a = Poly::from_i64(&[5, -3, 0, 2, 7]);
        let b = Poly::from_i64(&[1, 0, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn sturm_counts_closed_interval() {
        let p = Poly::from_i64(&[1, 0, -1]);
        assert_eq!(p.count_real_roots_in(&rat(-1), &rat(1)), 2);
        assert_eq!(p.count_real_roots_in(&ratio(-1, 2), &ratio(1, 2)), 0);
        assert_eq!(p.count_real_roots_in(&rat(1), &rat(3)), 1);
        assert_eq!(Poly::from_i64(&[1, 0, 1]).count_real_roots_in(&rat(-5), &rat(5)), 0);
        let sq = Poly::from_roots(&[rat(2), rat(2), rat(3)]);
        assert_eq!(sq.count_real_roots_in(&rat(0), &rat(10)), 2);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(Poly::new(vec![ratio(-1, 2), rat(0), ratio(3, 2)]).to_string(), "3/2*x^2 - 1/2");
        assert_eq!(Poly::from_i64(&[0, -1]).display_in("k"), "-k");
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-20i64..20, 1i64..9).prop_map(|(n, d)| ratio(n, d))
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(arb_rat(), 0..6).prop_map(Poly::new)
    }

    proptest! {
        #[test]
        fn field_laws_exact(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        }

        #[test]
        fn product_evaluates_pointwise(p in arb_poly(), q in arb_poly(), x in arb_rat()) {
            prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
        }

        #[test]
        fn antiderivative_inverts_derivative(p in arb_poly()) {
            prop_assert_eq!(p.antiderivative().derivative(1), p);
        }
    }
}
