//! Generalized power sums `s_k = Σ_j Σ_ℓ c_{ℓ,j} (k)_ℓ ξ_j^{k-ℓ}`.
//!
//! Such a sequence is annihilated by `Π_j (S - ξ_j)^n`, where `S` is the
//! shift. This module evaluates models, builds that recurrence, recovers
//! coefficients for known nodes (confluent Vandermonde), recovers the nodes
//! themselves from samples (Hankel annihilator, floating point), and forms the
//! generating function `Σ_k s_k z^{-k-1}` in partial fractions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::ratfun::RatFun;
use crate::roots::complex_roots;
use crate::scalar::{factorial_s, falling_s, powu, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSumModel<S> {
    pub nodes: Vec<S>,
    pub order: usize,
    /// `coeffs[j][ℓ]` is `c_{ℓ,j}`.
    pub coeffs: Vec<Vec<S>>,
}

/// `(k)_ℓ ξ^{k-ℓ}`, zero for `k < ℓ`. At `ξ = 0` this is `ℓ!` when `k = ℓ`.
pub fn basis<S: Scalar>(xi: &S, l: usize, k: usize) -> S {
    if k < l {
        return S::zero();
    }
    falling_s::<S>(k as i64, l) * powu(xi, (k - l) as u64)
}

fn basis_f64(xi: f64, l: usize, k: usize) -> f64 {
    if k < l {
        return 0.0;
    }
    let mut f = 1.0;
    for t in 0..l {
        f *= (k - t) as f64;
    }
    f * xi.powi((k - l) as i32)
}

impl<S: Scalar> PowerSumModel<S> {
    pub fn new(nodes: Vec<S>, order: usize, coeffs: Vec<Vec<S>>) -> Self {
        assert_eq!(nodes.len(), coeffs.len(), "one coefficient vector per node");
        assert!(coeffs.iter().all(|c| c.len() == order), "coefficient vectors must have length n");
        PowerSumModel { nodes, order, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.is_zero())
    }

    pub fn eval(&self, k: usize) -> S {
        let mut acc = S::zero();
        for (xi, cs) in self.nodes.iter().zip(&self.coeffs) {
            for (l, c) in cs.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc + c.clone() * basis(xi, l, k);
                }
            }
        }
        acc
    }

    /// `s_0 .. s_{count-1}`.
    pub fn samples(&self, count: usize) -> Vec<S> {
        (0..count).map(|k| self.eval(k)).collect()
    }

    /// Coefficients (lowest power first) of the monic `Π_j (z - ξ_j)^n`.
    pub fn char_recurrence(&self) -> Vec<S> {
        let mut poly = vec![S::one()];
        for xi in &self.nodes {
            for _ in 0..self.order {
                let mut next = vec![S::zero(); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i + 1] = next[i + 1].clone() + c.clone();
                    next[i] = next[i].clone() - c.clone() * xi.clone();
                }
                poly = next;
            }
        }
        poly
    }

    /// Partial-fraction form of `Σ_k s_k z^{-k-1}`: `Σ ℓ! c_{ℓ,j} / (z - ξ_j)^{ℓ+1}`.
    pub fn generating_function(&self) -> RatFun<S> {
        let terms = self
            .coeffs
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(l, c)| factorial_s::<S>(l) * c.clone()).collect())
            .collect();
        RatFun::new(self.nodes.clone(), terms)
    }

    pub fn to_f64(&self) -> PowerSumModel<f64> {
        PowerSumModel {
            nodes: self.nodes.iter().map(Scalar::to_f64).collect(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.iter().map(Scalar::to_f64).collect()).collect(),
        }
    }
}

/// `Σ_t rec[t] s_{k+t}` for each `k` that fits in `samples`.
pub fn apply_recurrence<S: Scalar>(rec: &[S], samples: &[S]) -> Vec<S> {
    if samples.len() < rec.len() {
        return Vec::new();
    }
    (0..=samples.len() - rec.len())
        .map(|k| rec.iter().enumerate().fold(S::zero(), |acc, (t, r)| acc + r.clone() * samples[k + t].clone()))
        .collect()
}

/// Number of leading zero terms.
pub fn leading_zero_count<S: Scalar>(samples: &[S]) -> usize {
    samples.iter().take_while(|s| s.is_zero()).count()
}

/// Recover `c_{ℓ,j}` from exactly `n · #nodes` samples.
pub fn solve_coeffs<S: Scalar>(nodes: &[S], order: usize, samples: &[S]) -> Result<PowerSumModel<S>> {
    let size = order * nodes.len();
    if samples.len() != size {
        return Err(Error::InvalidInput(format!("need exactly {size} samples, got {}", samples.len())));
    }
    let matrix: Vec<Vec<S>> = (0..size)
        .map(|k| nodes.iter().flat_map(|xi| (0..order).map(move |l| basis(xi, l, k))).collect())
        .collect();
    let flat = linalg::solve(matrix, samples.to_vec())?;
    let coeffs = flat.chunks(order).map(|c| c.to_vec()).collect();
    Ok(PowerSumModel::new(nodes.to_vec(), order, coeffs))
}

/// Least-squares fit of coefficients for known nodes, each with its own
/// multiplicity. Returns the model padded to `order` and the relative residual.
pub fn fit_coeffs(nodes: &[f64], multiplicities: &[usize], order: usize, samples: &[f64]) -> Result<(PowerSumModel<f64>, f64)> {
    let cols: Vec<(usize, usize)> = multiplicities
        .iter()
        .enumerate()
        .flat_map(|(j, &m)| (0..m).map(move |l| (j, l)))
        .collect();
    if samples.len() < cols.len() {
        return Err(Error::InvalidInput(format!("{} unknowns but only {} samples", cols.len(), samples.len())));
    }
    let a = DMatrix::from_fn(samples.len(), cols.len(), |k, c| basis_f64(nodes[cols[c].0], cols[c].1, k));
    let b = DVector::from_column_slice(samples);
    let (x, _) = linalg::lstsq(&a, &b)?;
    let mut coeffs = vec![vec![0.0; order]; nodes.len()];
    for (c, &(j, l)) in cols.iter().enumerate() {
        coeffs[j][l] = x[c];
    }
    let residual = relative_residual(&(&a * &x - &b), &b);
    Ok((PowerSumModel::new(nodes.to_vec(), order, coeffs), residual))
}

fn relative_residual(r: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let scale = b.norm();
    if scale == 0.0 {
        r.norm()
    } else {
        r.norm() / scale
    }
}

/// Tolerances for [`recover_nodes`].
#[derive(Clone, Debug, PartialEq)]
pub struct NodeRecoveryConfig {
    /// Singular values at or below `rank_tol · σ_max` of the Hankel matrix
    /// count as zero. Above that floor the rank is placed at the largest
    /// ratio between consecutive singular values.
    pub rank_tol: f64,
    /// Roots closer than `cluster_gap · max(1, spread)` are merged into one node.
    pub cluster_gap: f64,
    /// Imaginary part above which a cluster is not accepted as a real node.
    pub imag_tol: f64,
    /// Largest acceptable condition number of the annihilator fit.
    pub max_condition: f64,
    /// Largest acceptable relative residual of the fitted recurrence.
    pub residual_tol: f64,
    /// Gauss-Newton refinement iterations on nodes and coefficients.
    pub refine_iterations: usize,
}

impl Default for NodeRecoveryConfig {
    fn default() -> Self {
        NodeRecoveryConfig {
            rank_tol: 1e-15,
            cluster_gap: 1e-6,
            imag_tol: 1e-4,
            max_condition: 1e14,
            residual_tol: 1e-6,
            refine_iterations: 30,
        }
    }
}

/// Nodes recovered from samples, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeEstimate {
    pub nodes: Vec<f64>,
    /// Numerical multiplicity of each node (size of its root cluster).
    pub multiplicities: Vec<usize>,
    /// Numerical rank of the Hankel matrix, i.e. the fitted recurrence length.
    pub rank: usize,
    /// Condition number of the annihilator fit.
    pub condition: f64,
    /// Relative residual of the power-sum fit at the refined nodes.
    pub residual: f64,
    /// Raw annihilator roots before clustering.
    pub raw_roots: Vec<Complex64>,
}

/// Recover the nodes of a power sum of order `n` with at most `p + 2` nodes
/// from at least `2 n (p + 2)` samples.
///
/// The recurrence length is taken from the numerical rank of the sample
/// Hankel matrix, so nodes whose top coefficients vanish show up with a lower
/// multiplicity. Roots are grouped into at most `p + 2` clusters and refined
/// jointly with the coefficients by Gauss-Newton.
pub fn recover_nodes(samples: &[f64], order: usize, p: usize, cfg: &NodeRecoveryConfig) -> Result<NodeEstimate> {
    let max_nodes = p + 2;
    let r_max = order * max_nodes;
    if samples.len() < 2 * r_max {
        return Err(Error::InvalidInput(format!(
            "node recovery needs {} samples, got {}",
            2 * r_max,
            samples.len()
        )));
    }
    let scale = samples.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
    if !scale.is_finite() {
        return Err(Error::InvalidInput("non-finite samples".into()));
    }
    if scale == 0.0 {
        return Err(Error::WrongModelOrder("zero model: all samples vanish".into()));
    }
    let s: Vec<f64> = samples.iter().map(|v| v / scale).collect();
    let len = s.len();

    let hankel = DMatrix::from_fn(len - r_max, r_max + 1, |i, j| s[i + j]);
    // A short, wide matrix has structural zero singular values.
    let mut sv = linalg::singular_values(&hankel);
    sv.resize(r_max + 1, 0.0);
    let rank = gap_rank(&sv, cfg.rank_tol);
    if rank > r_max {
        return Err(Error::WrongModelOrder(format!(
            "sample Hankel matrix has full rank {}; more than {max_nodes} nodes or wrong order",
            rank
        )));
    }
    if rank == 0 {
        return Err(Error::WrongModelOrder("zero model: all samples vanish".into()));
    }

    // Monic annihilator of length `rank`: Σ_{t<rank} h_t s_{k+t} = -s_{k+rank}.
    let rows = len - rank;
    let a = DMatrix::from_fn(rows, rank, |k, t| s[k + t]);
    let b = DVector::from_fn(rows, |k, _| -s[k + rank]);
    let (h, fit_sv) = linalg::lstsq(&a, &b)?;
    let condition = linalg::condition(&fit_sv);
    if condition > cfg.max_condition {
        return Err(Error::IllConditioned { condition });
    }
    let fit_residual = relative_residual(&(&a * &h - &b), &b);
    if fit_residual > cfg.residual_tol {
        return Err(Error::WrongModelOrder(format!(
            "annihilating recurrence residual {fit_residual:.3e} exceeds {:.1e}",
            cfg.residual_tol
        )));
    }
    let mut monic: Vec<f64> = h.iter().copied().collect();
    monic.push(1.0);
    let raw_roots = complex_roots(&monic);

    let clusters = cluster_roots(&raw_roots, max_nodes, cfg.cluster_gap);
    let mut nodes = Vec::with_capacity(clusters.len());
    let mut multiplicities = Vec::with_capacity(clusters.len());
    for cluster in &clusters {
        let mean = cluster.iter().sum::<Complex64>() / cluster.len() as f64;
        if mean.im.abs() > cfg.imag_tol * mean.norm().max(1.0) {
            return Err(Error::WrongModelOrder(format!("recovered node {mean} is not real")));
        }
        if cluster.len() > order {
            return Err(Error::WrongModelOrder(format!(
                "node {:.6} has multiplicity {} above the operator order {order}",
                mean.re,
                cluster.len()
            )));
        }
        nodes.push(mean.re);
        multiplicities.push(cluster.len());
    }

    let (nodes, residual) = refine(&s, nodes, &multiplicities, order, cfg.refine_iterations)?;
    let mut order_idx: Vec<usize> = (0..nodes.len()).collect();
    order_idx.sort_by(|&i, &j| nodes[i].total_cmp(&nodes[j]));
    Ok(NodeEstimate {
        nodes: order_idx.iter().map(|&i| nodes[i]).collect(),
        multiplicities: order_idx.iter().map(|&i| multiplicities[i]).collect(),
        rank,
        condition,
        residual,
        raw_roots,
    })
}

/// Rank at the largest drop `σ_{r-1} / σ_r` of a descending spectrum; values
/// at or below the floor are zero, and the first drop to zero wins outright.
/// Confluent nodes spread the spectrum over many decades, so a fixed relative
/// threshold cuts off genuine directions that a gap still separates. Full rank
/// is weighed against machine precision.
fn gap_rank(sv: &[f64], rank_tol: f64) -> usize {
    let top = sv.first().copied().unwrap_or(0.0);
    let floor = rank_tol * top;
    let tail = floor.max(f64::EPSILON * top);
    let mut best = (0usize, 0.0_f64);
    for r in 1..=sv.len() {
        let above = sv[r - 1];
        if above <= floor {
            break;
        }
        let below = match sv.get(r) {
            Some(&v) if v <= floor => return r,
            Some(&v) => v,
            None => tail,
        };
        let ratio = above / below;
        if ratio > best.1 {
            best = (r, ratio);
        }
    }
    best.0
}

/// Agglomerative clustering: merge the closest pair of clusters while their
/// centers are closer than the gap threshold or there are too many clusters.
fn cluster_roots(roots: &[Complex64], max_clusters: usize, gap: f64) -> Vec<Vec<Complex64>> {
    let spread = roots
        .iter()
        .flat_map(|a| roots.iter().map(move |b| (a - b).norm()))
        .fold(0.0_f64, f64::max);
    let threshold = gap * spread.max(1.0);
    let mut clusters: Vec<Vec<Complex64>> = roots.iter().map(|&r| vec![r]).collect();
    let center = |c: &Vec<Complex64>| c.iter().sum::<Complex64>() / c.len() as f64;
    while clusters.len() > 1 {
        let mut best = (0, 1, f64::INFINITY);
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let d = (center(&clusters[i]) - center(&clusters[j])).norm();
                if d < best.2 {
                    best = (i, j, d);
                }
            }
        }
        if best.2 >= threshold && clusters.len() <= max_clusters {
            break;
        }
        let merged = clusters.remove(best.1);
        clusters[best.0].extend(merged);
    }
    clusters
}

/// Gauss-Newton on `(ξ_j, c_{ℓ,j})`. The derivative of `(k)_ℓ ξ^{k-ℓ}` in `ξ`
/// is the next basis function `(k)_{ℓ+1} ξ^{k-ℓ-1}`.
fn refine(samples: &[f64], mut nodes: Vec<f64>, mults: &[usize], order: usize, iterations: usize) -> Result<(Vec<f64>, f64)> {
    let (model, mut residual) = fit_coeffs(&nodes, mults, order, samples)?;
    let mut coeffs = model.coeffs;
    let ncoef: usize = mults.iter().sum();
    let unknowns = nodes.len() + ncoef;
    if samples.len() <= unknowns {
        return Ok((nodes, residual));
    }
    for _ in 0..iterations {
        let resid_vec = DVector::from_fn(samples.len(), |k, _| {
            let mut v = -samples[k];
            for (j, &xi) in nodes.iter().enumerate() {
                for l in 0..mults[j] {
                    v += coeffs[j][l] * basis_f64(xi, l, k);
                }
            }
            v
        });
        let jac = DMatrix::from_fn(samples.len(), unknowns, |k, col| {
            if col < nodes.len() {
                let j = col;
                (0..mults[j]).map(|l| coeffs[j][l] * basis_f64(nodes[j], l + 1, k)).sum()
            } else {
                let (j, l) = coef_index(mults, col - nodes.len());
                basis_f64(nodes[j], l, k)
            }
        });
        // Node and coefficient columns differ in scale by many decades.
        let norms: Vec<f64> = jac.column_iter().map(|c| c.norm().max(f64::MIN_POSITIVE)).collect();
        let scaled = DMatrix::from_fn(jac.nrows(), unknowns, |k, col| jac[(k, col)] / norms[col]);
        let (step, _) = linalg::lstsq(&scaled, &(-&resid_vec))?;
        let mut accepted = None;
        let mut damping = 1.0;
        for _ in 0..8 {
            let trial_nodes: Vec<f64> = nodes.iter().enumerate().map(|(j, x)| x + damping * step[j] / norms[j]).collect();
            let (trial, trial_res) = fit_coeffs(&trial_nodes, mults, order, samples)?;
            if trial_res < residual {
                accepted = Some((trial_nodes, trial.coeffs, trial_res));
                break;
            }
            damping *= 0.5;
        }
        let Some((trial_nodes, trial_coeffs, trial_res)) = accepted else {
            break;
        };
        let moved = trial_nodes.iter().zip(&nodes).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        nodes = trial_nodes;
        coeffs = trial_coeffs;
        residual = trial_res;
        if moved < 1e-15 * nodes.iter().fold(1.0_f64, |m, x| m.max(x.abs())) {
            break;
        }
    }
    Ok((nodes, residual))
}

fn coef_index(mults: &[usize], mut idx: usize) -> (usize, usize) {
    for (j, &m) in mults.iter().enumerate() {
        if idx < m {
            return (j, idx);
        }
        idx -= m;
    }
    unreachable!("coefficient index out of range")
}
