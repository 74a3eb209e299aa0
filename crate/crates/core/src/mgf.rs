//! The moment generating function `I_f(z) = Σ_k m_k z^{-k-1}` and the ODE
//! `L I_f = R_f` it satisfies, with `R_f` rational with poles at the jumps.
//!
//! When `α > 0`, `L I_f` also has a polynomial part in `z`. Only the
//! coefficients of `z^{-k-1}` are governed by the moment recurrence, so the
//! residual is taken on that tail and the polynomial part is reported beside it.

use num_traits::Zero;

use crate::concomitant::{power_sum_model, JumpData};
use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::laurent::{Expansion, LaurentTail};
use crate::momrec::MomentSequence;
use crate::ratfun::RatFun;
use crate::scalar::Scalar;

/// `Σ_{k=0}^{K} m_k z^{-k-1}`, truncation order `K + 1`.
pub fn moment_series<S: Scalar>(m: &MomentSequence<S>) -> LaurentTail<S> {
    LaurentTail::new(m.values().to_vec())
}

/// `Σ_j p_j(z) s^{(j)}(z)`. The tail is exact through `z^{-(T - α)}` when `s`
/// is known through `z^{-T}`.
pub fn apply_operator_series<S: Scalar>(op: &DiffOperator, s: &LaurentTail<S>) -> Expansion<S> {
    let mut deriv = s.clone();
    let mut total: Option<Expansion<S>> = None;
    for (j, p) in op.coeffs().iter().enumerate() {
        if j > 0 {
            deriv = deriv.derivative();
        }
        for (i, a) in p.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let term = deriv.mul_z_power(i).scale(&S::from_rat(a));
            total = Some(match total {
                None => term,
                Some(acc) => acc.add(&term),
            });
        }
    }
    total.expect("p_n is nonzero")
}

/// `R_f = Σ_j Σ_ℓ ℓ! c_{ℓ,j} / (z - ξ_j)^{ℓ+1}`; its expansion coefficients are `ε_k`.
pub fn rhs_rational<S: Scalar>(op: &DiffOperator, jumps: &JumpData<S>) -> RatFun<S> {
    power_sum_model(op, jumps).generating_function()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MgfReport<S> {
    /// Coefficients of `z^{-1}, ..., z^{-K}` in `L I_f`.
    pub lhs: Vec<S>,
    /// The same coefficients of `R_f`.
    pub rhs: Vec<S>,
    pub residuals: Vec<S>,
    /// Polynomial part of `L I_f` (powers `z^0, z^1, ...`).
    pub polynomial_part: Vec<S>,
    pub rational: RatFun<S>,
}

impl<S: Scalar> MgfReport<S> {
    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.magnitude()))
    }

    /// First `t` (power `z^{-t}`) whose residual exceeds `tol`; `tol = 0`
    /// means any nonzero residual.
    pub fn first_failure(&self, tol: f64) -> Option<usize> {
        self.residuals
            .iter()
            .position(|r| if tol == 0.0 { !r.is_zero() } else { r.magnitude() > tol })
            .map(|i| i + 1)
    }
}

/// Compare `L I_f` with `R_f` coefficient by coefficient through `z^{-order}`.
pub fn verify_mgf_ode<S: Scalar>(op: &DiffOperator, m: &MomentSequence<S>, jumps: &JumpData<S>, order: usize) -> Result<MgfReport<S>> {
    jumps.check_order(op)?;
    let lhs_full = apply_operator_series(op, &moment_series(m));
    if lhs_full.tail.truncation_order() < order {
        let needed = (order as i64 + op.alpha()).max(0) as usize;
        return Err(Error::InsufficientMoments { needed, available: m.len() });
    }
    let rational = rhs_rational(op, jumps);
    let lhs: Vec<S> = lhs_full.tail.coeffs()[..order].to_vec();
    let rhs: Vec<S> = (0..order).map(|k| rational.expansion_coeff(k)).collect();
    let residuals = lhs.iter().zip(&rhs).map(|(a, b)| a.clone() - b.clone()).collect();
    Ok(MgfReport { lhs, rhs, residuals, polynomial_part: lhs_full.polynomial, rational })
}
