//! Recover jump locations and jump vectors of `f` from its moments, for a
//! known operator, and rebuild `f` from them.
//!
//! Pipeline: `μ_k` from the moments, nodes from the `μ` sequence (a power sum
//! with one node per jump), coefficients by least squares at those nodes,
//! then jump vectors by inverting the per-node coefficient map.

use crate::concomitant::{c_to_jump, epsilon_direct, JumpData};
use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::momrec::{epsilon_from_moments, generate_moments, MomentSequence};
use crate::powersums::{fit_coeffs, recover_nodes, NodeEstimate, NodeRecoveryConfig};
use crate::series::Propagator;

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionConfig {
    pub nodes: NodeRecoveryConfig,
    /// A node counts as a root of `p_n` when `|p_n(ξ)| <= singular_tol · max(1, max_x |p_n|)`
    /// over the recovered nodes.
    pub singular_tol: f64,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        ReconstructionConfig { nodes: NodeRecoveryConfig::default(), singular_tol: 1e-8 }
    }
}

/// Moments `m_0 .. m_{N-1}` needed for `p_max` interior jumps: the node fit
/// uses `2 n (p_max + 2)` values of `μ_k`, and `μ_k` reads up to `m_{k+α}`.
pub fn required_moments(op: &DiffOperator, p_max: usize) -> usize {
    let samples = 2 * op.order() * (p_max + 2);
    (samples as i64 + op.alpha().max(0)) as usize
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub jumps: JumpData<f64>,
    pub estimate: NodeEstimate,
    /// Relative residual of the full-order coefficient fit.
    pub fit_residual: f64,
    /// Number of `μ_k` values used.
    pub samples_used: usize,
}

pub fn recover_jumps(op: &DiffOperator, m: &MomentSequence<f64>, p_max: usize, cfg: &ReconstructionConfig) -> Result<Reconstruction> {
    let n = op.order();
    let needed = required_moments(op, p_max);
    if m.len() < needed {
        return Err(Error::InsufficientMoments { needed: needed - 1, available: m.len() });
    }
    let mu = epsilon_from_moments(op, m)?;
    let estimate = recover_nodes(&mu, n, p_max, &cfg.nodes)?;
    let full = vec![n; estimate.nodes.len()];
    let (model, fit_residual) = fit_coeffs(&estimate.nodes, &full, n, &mu)?;

    let lead = op.leading();
    let lead_scale = estimate.nodes.iter().fold(1.0_f64, |acc, &x| acc.max(lead.eval_f64(x).abs()));
    let mut jumps = Vec::with_capacity(estimate.nodes.len());
    for (xi, c) in estimate.nodes.iter().zip(&model.coeffs) {
        if lead.eval_f64(*xi).abs() <= cfg.singular_tol * lead_scale {
            return Err(Error::SingularNode { xi: format!("{xi:.12}") });
        }
        jumps.push(c_to_jump(op, xi, c)?);
    }
    let jumps = JumpData::new(estimate.nodes.clone(), jumps)
        .map_err(|_| Error::WrongModelOrder("recovered nodes are not distinct".into()))?;
    Ok(Reconstruction { jumps, estimate, fit_residual, samples_used: mu.len() })
}

/// Relative distance below which a grid point is moved onto a node.
pub const SNAP_TOL: f64 = 1e-7;

/// Move grid points within `SNAP_TOL · max(1, span)` of a node onto it.
pub fn snap_to_nodes(grid: &[f64], nodes: &[f64]) -> Vec<f64> {
    let span = match (nodes.first(), nodes.last()) {
        (Some(a), Some(b)) => (b - a).abs().max(1.0),
        _ => return grid.to_vec(),
    };
    grid.iter()
        .map(|&x| nodes.iter().copied().find(|xi| (x - xi).abs() <= SNAP_TOL * span).unwrap_or(x))
        .collect()
}

/// Evaluate the signal described by `jumps` on `grid`.
///
/// Starting from zero left of the first node, each node adds its jump vector
/// to the running derivative vector and the ODE carries it to the next node.
/// Nodes take the right limit, the last node the left limit, and points
/// outside the node range are zero. Grid points within `SNAP_TOL` (relative to
/// the node span) of a node are treated as that node, so a grid that samples
/// the true breakpoints is not thrown to the wrong side by rounding in the
/// recovered nodes.
pub fn rebuild_signal(op: &DiffOperator, jumps: &JumpData<f64>, grid: &[f64]) -> Result<Vec<f64>> {
    jumps.check_order(op)?;
    let nodes = jumps.nodes();
    let grid = snap_to_nodes(grid, nodes);
    let prop = Propagator::new(op);
    let mut out = vec![0.0; grid.len()];
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&i, &j| grid[i].total_cmp(&grid[j]));
    let mut state = vec![0.0; op.order()];
    let last = nodes.len() - 1;
    for idx in 0..last {
        for (s, d) in state.iter_mut().zip(&jumps.jumps()[idx]) {
            *s += d;
        }
        let (a, b) = (nodes[idx], nodes[idx + 1]);
        let members: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&g| grid[g] >= a && (grid[g] < b || (idx + 1 == last && grid[g] <= b)))
            .collect();
        let xs: Vec<f64> = members.iter().map(|&g| grid[g]).collect();
        let (values, end) = prop.sweep(a, &state, b, &xs)?;
        for (g, v) in members.into_iter().zip(values) {
            out[g] = v;
        }
        state = end;
    }
    Ok(out)
}

/// Consistency of a jump estimate with the given moments.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    /// `max_k |μ_k - ε_k(J)| / max_k |μ_k|`.
    pub epsilon_residual: f64,
    /// `max |m_k - m̃_k| / max |m_k|` where `m̃` is regenerated forward from a
    /// seed past `Λ` using `ε(J)`; absent when the moments are too few.
    pub moment_residual: Option<f64>,
    /// Last index used by the forward regeneration.
    pub regenerated_through: Option<usize>,
}

pub fn residual_report(op: &DiffOperator, m: &MomentSequence<f64>, jumps: &JumpData<f64>) -> Result<ResidualReport> {
    let mu = epsilon_from_moments(op, m)?;
    let eps: Vec<f64> = (0..mu.len() + op.order() + 1).map(|k| epsilon_direct(op, jumps, k)).collect();
    let mu_scale = mu.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    let epsilon_residual = mu.iter().zip(&eps).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs())) / mu_scale;

    let alpha = op.alpha();
    let k0 = (op.lambda_cap()? as i64 + 1).max(-alpha).max(0);
    let seed_len = (k0 + alpha) as usize;
    let (moment_residual, regenerated_through) = if m.len() > seed_len + 1 {
        let last = m.len() - 1;
        let regen = generate_moments(op, &eps, &m.values()[..seed_len], last)?;
        let scale = m.values().iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
        let diff = m.values().iter().zip(regen.values()).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
        (Some(diff / scale), Some(last))
    } else {
        (None, None)
    };
    Ok(ResidualReport { epsilon_residual, moment_residual, regenerated_through })
}
