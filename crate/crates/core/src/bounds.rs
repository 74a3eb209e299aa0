//! Upper bounds on how many leading moments of a nonzero piecewise solution
//! can vanish, and on how many moments determine such a signal.
//!
//! All quantities are counts: a bound `B` means at most `B` leading moments
//! `m_0, ..., m_{B-1}` can vanish. The largest vanishing index is `B - 1`.

use std::fmt;

use crate::diffop::DiffOperator;
use crate::error::Result;
use crate::momrec::MomentSequence;
use crate::scalar::{Rat, Scalar};

/// Bound that holds only under a hypothesis on the operator or signal family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalBound {
    pub value: i64,
    pub applicable: bool,
    pub reason: String,
}

/// `(p + 2) n + α - 1`, valid when `p_n` does not vanish at every node.
///
/// Since the nodes are unknown, applicability is decided from family-level
/// sufficient conditions: `deg p_n < p + 2` (some node must miss the roots of
/// `p_n`), or, when an interval is given, `p_n` has no root on it.
pub fn sigma_bound_regular(op: &DiffOperator, p: usize, interval: Option<(&Rat, &Rat)>) -> ConditionalBound {
    let n = op.order() as i64;
    let value = (p as i64 + 2) * n + op.alpha() - 1;
    let dn = op.leading_degree();
    if dn < p + 2 {
        return ConditionalBound {
            value,
            applicable: true,
            reason: format!("deg p_n = {dn} < p + 2 = {}", p + 2),
        };
    }
    match interval {
        Some((a, b)) => {
            let roots = op.leading().count_real_roots_in(a, b);
            if roots == 0 {
                ConditionalBound { value, applicable: true, reason: format!("p_n has no root on [{a}, {b}]") }
            } else {
                ConditionalBound {
                    value,
                    applicable: false,
                    reason: format!("p_n has {roots} root(s) on [{a}, {b}] and deg p_n = {dn} >= p + 2"),
                }
            }
        }
        None => ConditionalBound {
            value,
            applicable: false,
            reason: format!("deg p_n = {dn} >= p + 2 and no interval given"),
        },
    }
}

/// `max{n (p + 2) - 1, Λ} + α`, valid for every operator.
pub fn sigma_bound_general(op: &DiffOperator, p: usize) -> Result<i64> {
    let n = op.order() as i64;
    let lambda = op.lambda_cap()? as i64;
    Ok((n * (p as i64 + 2) - 1).max(lambda) + op.alpha())
}

/// `max{(p + 2) n, λ} + d_n - n - 1` for operators regular-singular at
/// infinity; `λ` is 0 when there is no positive integer exponent.
pub fn sigma_bound_fuchsian(op: &DiffOperator, p: usize) -> ConditionalBound {
    let n = op.order() as i64;
    let analysis = op.infinity_analysis();
    let lambda = analysis.lambda.unwrap_or(0) as i64;
    let value = ((p as i64 + 2) * n).max(lambda) + op.leading_degree() as i64 - n - 1;
    if analysis.fuchsian {
        ConditionalBound { value, applicable: true, reason: "operator is Fuchsian at infinity".into() }
    } else {
        ConditionalBound { value, applicable: false, reason: "operator is not Fuchsian at infinity".into() }
    }
}

/// Number of moments sufficient to tell apart two signals with `p` interior
/// jumps: the general vanishing bound for `2p`.
pub fn tau_bound(op: &DiffOperator, p: usize) -> Result<i64> {
    sigma_bound_general(op, 2 * p)
}

/// Leading zero moments of a concrete sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingCount {
    pub count: usize,
    /// Every available moment vanished, so the true count may be larger.
    pub truncated: bool,
}

/// Count leading zero moments. Exact scalars compare with zero; floating
/// values count as zero when `|m_k| <= tol · max |m|`.
pub fn vanishing_count<S: Scalar>(m: &MomentSequence<S>, tol: f64) -> VanishingCount {
    let scale = m.values().iter().fold(0.0_f64, |acc, v| acc.max(v.magnitude()));
    let count = m
        .values()
        .iter()
        .take_while(|v| if S::is_exact() { v.is_zero() } else { v.magnitude() <= tol * scale })
        .count();
    VanishingCount { count, truncated: count == m.len() }
}

/// Every bound for one `(L, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub p: usize,
    pub n: usize,
    pub alpha: i64,
    pub lambda_cap: u64,
    pub leading_degree: usize,
    pub fuchsian: bool,
    /// Largest positive integer exponent at infinity, if any.
    pub lambda: Option<u64>,
    pub regular: ConditionalBound,
    pub general: i64,
    pub fuchsian_bound: ConditionalBound,
    pub tau: i64,
}

pub fn bound_report(op: &DiffOperator, p: usize, interval: Option<(&Rat, &Rat)>) -> Result<BoundReport> {
    let analysis = op.infinity_analysis();
    Ok(BoundReport {
        p,
        n: op.order(),
        alpha: op.alpha(),
        lambda_cap: op.lambda_cap()?,
        leading_degree: op.leading_degree(),
        fuchsian: analysis.fuchsian,
        lambda: analysis.lambda,
        regular: sigma_bound_regular(op, p, interval),
        general: sigma_bound_general(op, p)?,
        fuchsian_bound: sigma_bound_fuchsian(op, p),
        tau: tau_bound(op, p)?,
    })
}

impl BoundReport {
    /// `key=value` lines for scripts.
    pub fn porcelain(&self) -> String {
        let opt = |b: &ConditionalBound| if b.applicable { b.value.to_string() } else { "inapplicable".into() };
        let mut out = String::new();
        out.push_str(&format!("p={}\n", self.p));
        out.push_str(&format!("n={}\n", self.n));
        out.push_str(&format!("alpha={}\n", self.alpha));
        out.push_str(&format!("lambda_cap={}\n", self.lambda_cap));
        out.push_str(&format!("fuchsian={}\n", self.fuchsian));
        out.push_str(&format!("lambda={}\n", self.lambda.map_or("none".into(), |l| l.to_string())));
        out.push_str(&format!("regular_bound={}\n", opt(&self.regular)));
        out.push_str(&format!("general_bound={}\n", self.general));
        out.push_str(&format!("general_bound_index={}\n", self.general - 1));
        out.push_str(&format!("fuchsian_bound={}\n", opt(&self.fuchsian_bound)));
        out.push_str(&format!("tau_bound={}\n", self.tau));
        out
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cond = |b: &ConditionalBound| {
            if b.applicable {
                format!("{:<6} (index {}; {})", b.value, b.value - 1, b.reason)
            } else {
                format!("{:<6} (inapplicable: {})", "-", b.reason)
            }
        };
        writeln!(f, "order n            {}", self.n)?;
        writeln!(f, "interior jumps p   {}", self.p)?;
        writeln!(f, "alpha              {}", self.alpha)?;
        let note = if self.lambda_cap == 0 { " (no positive integer zero of q_alpha)" } else { "" };
        writeln!(f, "Lambda             {}{note}", self.lambda_cap)?;
        writeln!(f, "Fuchsian at inf    {}", self.fuchsian)?;
        writeln!(f, "sigma regular      {}", cond(&self.regular))?;
        writeln!(f, "sigma general      {:<6} (index {})", self.general, self.general - 1)?;
        writeln!(f, "sigma Fuchsian     {}", cond(&self.fuchsian_bound))?;
        writeln!(f, "tau                {:<6} (moments m_0..m_{} determine the signal)", self.tau, self.tau - 1)
    }
}
