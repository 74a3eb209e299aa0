//! Bilinear concomitant, the inhomogeneity `ε_k` of the moment recurrence,
//! and the per-node linear map from jump vectors to power-sum coefficients.
//!
//! For `L = Σ p_j ∂^j` the concomitant is
//! `P(u, v) = Σ_{r=0}^{n-1} u^{(r)} Σ_{s=0}^{n-1-r} (-1)^s ∂^s (p_{r+s+1} v)`,
//! so that `∫_a^b (v Lu - u L*v) = P(u, v)(b) - P(u, v)(a)`.

use std::fmt;

use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::Poly;
use crate::powersums::PowerSumModel;
use crate::scalar::{binomial_s, parse_scalar, Rat, Scalar};

/// Discontinuity data of a piecewise function, with `f ≡ 0` outside `[a, b]`.
///
/// `jumps[j][i] = f^{(i)}(ξ_j^+) - f^{(i)}(ξ_j^-)`. The first and last nodes are
/// the interval endpoints, so their jumps carry the boundary values.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpData<S> {
    nodes: Vec<S>,
    jumps: Vec<Vec<S>>,
}

impl<S: Scalar> JumpData<S> {
    pub fn new(nodes: Vec<S>, jumps: Vec<Vec<S>>) -> Result<Self> {
        if nodes.len() != jumps.len() {
            return Err(Error::InvalidInput(format!(
                "{} nodes but {} jump vectors",
                nodes.len(),
                jumps.len()
            )));
        }
        if nodes.is_empty() {
            return Err(Error::InvalidInput("jump data needs at least one node".into()));
        }
        let n = jumps[0].len();
        if n == 0 || jumps.iter().any(|d| d.len() != n) {
            return Err(Error::InvalidInput("jump vectors must share a nonzero length".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("nodes must be strictly increasing".into()));
        }
        Ok(JumpData { nodes, jumps })
    }

    pub fn nodes(&self) -> &[S] {
        &self.nodes
    }

    pub fn jumps(&self) -> &[Vec<S>] {
        &self.jumps
    }

    /// Length of each jump vector.
    pub fn order(&self) -> usize {
        self.jumps[0].len()
    }

    /// Number of interior nodes (`p`).
    pub fn interior_count(&self) -> usize {
        self.nodes.len().saturating_sub(2)
    }

    /// Check that the vectors match the order of `op`.
    pub fn check_order(&self, op: &DiffOperator) -> Result<()> {
        if self.order() != op.order() {
            return Err(Error::InvalidInput(format!(
                "jump vectors have length {}, operator order is {}",
                self.order(),
                op.order()
            )));
        }
        Ok(())
    }

    /// Parse lines of the form `xi: Δ0 Δ1 ...`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut jumps = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (head, body) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("jump line {}: expected `xi: d0 d1 ...`", lineno + 1)))?;
            nodes.push(parse_scalar::<S>(head)?);
            jumps.push(body.split_whitespace().map(parse_scalar::<S>).collect::<Result<Vec<_>>>()?);
        }
        JumpData::new(nodes, jumps).map_err(|e| match e {
            Error::InvalidInput(m) => Error::Parse(m),
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (xi, d) in self.nodes.iter().zip(&self.jumps) {
            let body: Vec<String> = d.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("{xi}: {}\n", body.join(" ")));
        }
        out
    }

    pub fn to_f64(&self) -> JumpData<f64> {
        JumpData {
            nodes: self.nodes.iter().map(Scalar::to_f64).collect(),
            jumps: self.jumps.iter().map(|d| d.iter().map(Scalar::to_f64).collect()).collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for JumpData<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `P_L(u, v)` as a polynomial in `x`.
pub fn concomitant_poly(op: &DiffOperator, u: &Poly, v: &Poly) -> Poly {
    let n = op.order();
    let mut total = Poly::zero();
    for r in 0..n {
        let mut inner = Poly::zero();
        for s in 0..n - r {
            let term = (op.coeff(r + s + 1) * v).derivative(s);
            inner = if s % 2 == 0 { inner + term } else { inner - term };
        }
        total = total + u.derivative(r) * inner;
    }
    total
}

pub fn concomitant_eval(op: &DiffOperator, u: &Poly, v: &Poly, x: &Rat) -> Rat {
    concomitant_poly(op, u, v).eval(x)
}

/// `∫_a^b (v Lu - u L*v) - [P(u, v)(b) - P(u, v)(a)]`; zero for every input.
pub fn greens_residual(op: &DiffOperator, u: &Poly, v: &Poly, a: &Rat, b: &Rat) -> Rat {
    let integrand = v * &op.apply(u) - u * &op.adjoint().apply(v);
    let p = concomitant_poly(op, u, v);
    integrand.integrate(a, b) - (p.eval(b) - p.eval(a))
}

/// `ε_k = Σ_j [P(f, x^k)(ξ_j^+) - P(f, x^k)(ξ_j^-)]`, computed from the jump
/// vectors by differentiating `p_m x^k` symbolically.
pub fn epsilon_direct<S: Scalar>(op: &DiffOperator, jumps: &JumpData<S>, k: usize) -> S {
    let n = op.order();
    let xk = Poly::monomial(Rat::from_integer(1.into()), k);
    let mut acc = S::zero();
    for (xi, delta) in jumps.nodes().iter().zip(jumps.jumps()) {
        for (r, d) in delta.iter().enumerate().take(n) {
            if d.is_zero() {
                continue;
            }
            let mut inner = S::zero();
            for s in 0..n - r {
                let w = (op.coeff(r + s + 1) * &xk).derivative(s).eval_as(xi);
                inner = if s % 2 == 0 { inner + w } else { inner - w };
            }
            acc = acc + d.clone() * inner;
        }
    }
    acc
}

/// The matrix taking a node's jump vector to its power-sum coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<S> {
    pub node: S,
    /// `matrix[ℓ][r]`: contribution of `Δ^{(r)}` to `c_ℓ`.
    pub matrix: Vec<Vec<S>>,
}

impl<S: Scalar> CMatrix<S> {
    pub fn apply(&self, delta: &[S]) -> Vec<S> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(delta).fold(S::zero(), |acc, (m, d)| acc + m.clone() * d.clone()))
            .collect()
    }

    pub fn determinant(&self) -> S {
        linalg::determinant(self.matrix.clone())
    }
}

/// `M[ℓ][r] = Σ_{s=ℓ}^{n-1-r} (-1)^s C(s, ℓ) p_{r+s+1}^{(s-ℓ)}(ξ)`.
///
/// Entries with `ℓ + r > n - 1` vanish and the anti-diagonal is
/// `(-1)^ℓ p_n(ξ)`, so `|det M| = |p_n(ξ)|^n`.
pub fn jump_to_c<S: Scalar>(op: &DiffOperator, xi: &S) -> CMatrix<S> {
    let n = op.order();
    let mut matrix = vec![vec![S::zero(); n]; n];
    for (l, row) in matrix.iter_mut().enumerate() {
        for (r, entry) in row.iter_mut().enumerate() {
            if l + r > n - 1 {
                continue;
            }
            let mut acc = S::zero();
            for s in l..n - r {
                let term = binomial_s::<S>(s, l) * op.coeff(r + s + 1).derivative(s - l).eval_as(xi);
                acc = if s % 2 == 0 { acc + term } else { acc - term };
            }
            *entry = acc;
        }
    }
    CMatrix { node: xi.clone(), matrix }
}

/// Invert [`jump_to_c`] by back-substitution along the anti-diagonal.
pub fn c_to_jump<S: Scalar>(op: &DiffOperator, xi: &S, c: &[S]) -> Result<Vec<S>> {
    let n = op.order();
    if c.len() != n {
        return Err(Error::InvalidInput(format!("coefficient vector has length {}, expected {n}", c.len())));
    }
    let pivot = op.leading().eval_as(xi);
    if pivot.is_zero() {
        return Err(Error::SingularNode { xi: xi.to_string() });
    }
    let m = jump_to_c(op, xi);
    let mut delta = vec![S::zero(); n];
    for l in (0..n).rev() {
        let r_star = n - 1 - l;
        let mut rhs = c[l].clone();
        for r in 0..r_star {
            rhs = rhs - m.matrix[l][r].clone() * delta[r].clone();
        }
        delta[r_star] = rhs / m.matrix[l][r_star].clone();
    }
    Ok(delta)
}

/// The power-sum model of `ε_k` generated by `jumps` under `op`.
pub fn power_sum_model<S: Scalar>(op: &DiffOperator, jumps: &JumpData<S>) -> PowerSumModel<S> {
    let coeffs = jumps
        .nodes()
        .iter()
        .zip(jumps.jumps())
        .map(|(xi, delta)| jump_to_c(op, xi).apply(delta))
        .collect();
    PowerSumModel::new(jumps.nodes().to_vec(), op.order(), coeffs)
}
