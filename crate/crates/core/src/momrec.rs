//! The moment recurrence `μ_k = ε_k`.
//!
//! For `f` piecewise annihilated by `L`, the moments `m_k = ∫ x^k f` satisfy
//! `μ_k := Σ_j Σ_i a_{i,j} (-1)^j (i+k)_j m_{i-j+k} = ε_k`, where `ε_k` depends
//! only on the jumps of `f` (see [`crate::concomitant`]).

use num_traits::Zero;

use crate::concomitant::{epsilon_direct, JumpData};
use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{falling_s, parse_scalar, Scalar};

/// Moments `m_0 ..= m_K`; indices below zero read as zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence<S> {
    values: Vec<S>,
}

impl<S: Scalar> MomentSequence<S> {
    pub fn new(values: Vec<S>) -> Self {
        MomentSequence { values }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `m_k`; zero for negative `k`, `None` past the end.
    pub fn get(&self, k: i64) -> Option<S> {
        if k < 0 {
            Some(S::zero())
        } else {
            self.values.get(k as usize).cloned()
        }
    }

    fn at(&self, k: i64) -> Result<S> {
        self.get(k).ok_or(Error::InsufficientMoments { needed: k as usize, available: self.values.len() })
    }

    /// One value per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .lines()
            .map(|l| l.split('#').next().unwrap().trim())
            .filter(|l| !l.is_empty())
            .map(parse_scalar::<S>)
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentSequence { values })
    }

    pub fn to_text(&self) -> String {
        self.values.iter().map(|v| format!("{v}\n")).collect()
    }

    pub fn to_f64(&self) -> MomentSequence<f64> {
        MomentSequence { values: self.values.iter().map(Scalar::to_f64).collect() }
    }
}

/// `μ_k` by the double sum over the coefficient table.
pub fn moment_form<S: Scalar>(op: &DiffOperator, m: &MomentSequence<S>, k: usize) -> Result<S> {
    let k = k as i64;
    let top = k + op.alpha();
    if top >= m.len() as i64 {
        return Err(Error::InsufficientMoments { needed: top as usize, available: m.len() });
    }
    let mut acc = S::zero();
    for (j, p) in op.coeffs().iter().enumerate() {
        for (i, a) in p.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (i, j64) = (i as i64, j as i64);
            let idx = i - j64 + k;
            if idx < 0 {
                continue;
            }
            let term = S::from_rat(a) * falling_s::<S>(i + k, j) * m.at(idx)?;
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
    }
    Ok(acc)
}

/// `μ_k` grouped by offset: `Σ_ℓ q_ℓ(k) m_{k+ℓ}`.
pub fn moment_form_grouped<S: Scalar>(op: &DiffOperator, m: &MomentSequence<S>, k: usize) -> Result<S> {
    let k = k as i64;
    let top = k + op.alpha();
    if top >= m.len() as i64 {
        return Err(Error::InsufficientMoments { needed: top as usize, available: m.len() });
    }
    let ks = S::from_i64(k);
    let mut acc = S::zero();
    for (l, q) in op.q_polys() {
        acc = acc + q.eval_as(&ks) * m.at(k + l)?;
    }
    Ok(acc)
}

/// Largest `k` for which `μ_k` is computable from `m`, if any.
pub fn last_valid_index<S: Scalar>(op: &DiffOperator, m: &MomentSequence<S>) -> Option<usize> {
    let last = m.len() as i64 - 1 - op.alpha();
    (last >= 0).then_some(last as usize)
}

/// `(μ_0, μ_1, ...)` up to the last computable index.
pub fn epsilon_from_moments<S: Scalar>(op: &DiffOperator, m: &MomentSequence<S>) -> Result<Vec<S>> {
    let last = last_valid_index(op, m)
        .ok_or(Error::InsufficientMoments { needed: op.alpha().max(0) as usize, available: m.len() })?;
    (0..=last).map(|k| moment_form(op, m, k)).collect()
}

/// Extend `seed` to `m_0 ..= m_K` by solving each recurrence instance for its
/// highest moment: `m_{k+α} = (ε_k - Σ_{ℓ<α} q_ℓ(k) m_{k+ℓ}) / q_α(k)`.
///
/// The first instance used is `k₀ = seed.len() - α`; it must exceed `Λ` so
/// that no `q_α(k)` vanishes along the way.
pub fn generate_moments<S: Scalar>(op: &DiffOperator, eps: &[S], seed: &[S], last: usize) -> Result<MomentSequence<S>> {
    let alpha = op.alpha();
    let k0 = seed.len() as i64 - alpha;
    if k0 < 0 {
        return Err(Error::InsufficientSeed(format!(
            "forward reach {alpha} needs at least {alpha} seed moments, got {}",
            seed.len()
        )));
    }
    let qs: Vec<(i64, Poly)> = op.q_polys();
    let (lead, rest) = qs.split_last().expect("q_α always present");
    let mut m = MomentSequence::new(seed.to_vec());
    for target in seed.len()..=last {
        let k = target as i64 - alpha;
        let ks = S::from_i64(k);
        let lead_value = lead.1.eval_as(&ks);
        if lead_value.is_zero() {
            return Err(Error::LeadingZero { k });
        }
        let mut rhs = eps.get(k as usize).cloned().ok_or_else(|| {
            Error::InsufficientSeed(format!("need eps_{k}, only {} values given", eps.len()))
        })?;
        for (l, q) in rest {
            rhs = rhs - q.eval_as(&ks) * m.at(k + l)?;
        }
        m.values.push(rhs / lead_value);
    }
    m.values.truncate(last + 1);
    Ok(m)
}

/// Per-index comparison of `μ_k` against `ε_k` computed from jumps.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceReport<S> {
    pub mu: Vec<S>,
    pub eps: Vec<S>,
    pub residuals: Vec<S>,
}

impl<S: Scalar> RecurrenceReport<S> {
    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.magnitude()))
    }

    /// First `k` whose residual exceeds `tol`; with `tol = 0` any nonzero
    /// residual counts.
    pub fn first_failure(&self, tol: f64) -> Option<usize> {
        self.residuals
            .iter()
            .position(|r| if tol == 0.0 { !r.is_zero() } else { r.magnitude() > tol })
    }

    pub fn is_exact(&self) -> bool {
        self.first_failure(0.0).is_none()
    }
}

pub fn verify_recurrence<S: Scalar>(op: &DiffOperator, m: &MomentSequence<S>, jumps: &JumpData<S>) -> Result<RecurrenceReport<S>> {
    jumps.check_order(op)?;
    let mu = epsilon_from_moments(op, m)?;
    let eps: Vec<S> = (0..mu.len()).map(|k| epsilon_direct(op, jumps, k)).collect();
    let residuals = mu.iter().zip(&eps).map(|(a, b)| a.clone() - b.clone()).collect();
    Ok(RecurrenceReport { mu, eps, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio, Rat};

    fn unit_moments(count: i64) -> MomentSequence<Rat> {
        MomentSequence::new((0..count).map(|k| ratio(1, k + 1)).collect())
    }

    fn p2_moments() -> MomentSequence<Rat> {
        // ∫_{-1}^{1} x^k (3x²-1)/2 dx
        MomentSequence::new(
            (0..8)
                .map(|k| {
                    if k % 2 == 1 {
                        rat(0)
                    } else {
                        ratio(3, k + 3) - ratio(1, k + 1)
                    }
                })
                .collect(),
        )
    }

    fn legendre(m: i64) -> DiffOperator {
        DiffOperator::from_i64(&[&[m * (m + 1)], &[0, -2], &[1, 0, -1]]).unwrap()
    }

    #[test]
    fn derivative_of_unit_step() {
        let d = DiffOperator::from_i64(&[&[], &[1]]).unwrap();
        let m = unit_moments(6);
        assert_eq!(moment_form(&d, &m, 0).unwrap(), rat(0));
        assert_eq!(moment_form(&d, &m, 1).unwrap(), rat(-1));
        let eps = epsilon_from_moments(&d, &m).unwrap();
        assert_eq!(eps.len(), 7);
        assert!(eps[1..].iter().all(|e| *e == rat(-1)));
    }

    #[test]
    fn legendre_two_vanishes() {
        let op = legendre(2);
        let m = p2_moments();
        assert_eq!(m.values()[2], ratio(4, 15));
        assert_eq!(m.values()[4], ratio(8, 35));
        assert_eq!(moment_form(&op, &m, 4).unwrap(), rat(0));
        assert!(epsilon_from_moments(&op, &m).unwrap().iter().all(|e| *e == rat(0)));
        for k in 0..8 {
            assert_eq!(moment_form(&op, &m, k).unwrap(), moment_form_grouped(&op, &m, k).unwrap());
        }
    }

    #[test]
    fn insufficient_moments() {
        let op = DiffOperator::from_i64(&[&[], &[0, 0, 0, 1]]).unwrap();
        let m = unit_moments(3);
        assert!(matches!(moment_form(&op, &m, 1), Err(Error::InsufficientMoments { .. })));
    }

    #[test]
    fn forward_generation_legendre() {
        let op = legendre(2);
        let m = generate_moments(&op, &vec![rat(0); 10], &[rat(0), rat(0), ratio(4, 15)], 7).unwrap();
        assert_eq!(m, p2_moments());
        let err = generate_moments(&op, &vec![rat(0); 10], &[rat(0), rat(0)], 7).unwrap_err();
        assert_eq!(err, Error::LeadingZero { k: 2 });
    }

    #[test]
    fn backward_reach_generation() {
        let d = DiffOperator::from_i64(&[&[], &[1]]).unwrap();
        let eps: Vec<Rat> = (0..12).map(|k| if k == 0 { rat(0) } else { rat(-1) }).collect();
        let m = generate_moments(&d, &eps, &[rat(1)], 9).unwrap();
        assert_eq!(m, unit_moments(10));
        assert!(matches!(generate_moments(&d, &eps[..3], &[rat(1)], 9), Err(Error::InsufficientSeed(_))));
    }

    #[test]
    fn parse_moments() {
        let m: MomentSequence<Rat> = MomentSequence::parse("1\n1/2 # half\n\n0.25\n").unwrap();
        assert_eq!(m.values(), &[rat(1), ratio(1, 2), ratio(1, 4)]);
        assert_eq!(m.get(-3), Some(rat(0)));
        assert_eq!(m.get(3), None);
    }
}
