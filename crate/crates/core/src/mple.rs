//! Shape parameter selection by maximum profile likelihood.
//!
//! Modelling the data as a zero-mean Gaussian field with covariance `σ² A(ε)`
//! and profiling out the process variance leaves the cost
//!
//! ```text
//! MPLE(ε) = N log(yᵀ A⁻¹ y) + log det A
//! ```
//!
//! (the constant `N(1 + log 2π − log N)` is dropped, so costs are comparable
//! only at fixed `N`). Both terms come from a single Cholesky factorization.
//! Values of `ε` for which the factorization fails are scored `+∞`, so the
//! search simply steps around the numerically singular flat limit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{
    kernel_matrix_from_distances, pairwise_distances, KernelFamily, KernelSpec, DEFAULT_SEPARATION_FLOOR,
};
use crate::linalg::{cholesky, CholeskyFactor};
use crate::optimize::minimize_bounded;
use crate::points::PointSet;

/// Size of the log-spaced probe grid that brackets the global basin.
pub const PROBE_POINTS: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeSearchConfig {
    pub eps_min: f64,
    pub eps_max: f64,
    /// Termination tolerance in `ln ε`.
    pub tol: f64,
    pub max_evals: usize,
}

impl Default for ShapeSearchConfig {
    fn default() -> Self {
        Self {
            eps_min: 1e-2,
            eps_max: 1e2,
            tol: 1e-3,
            max_evals: 100,
        }
    }
}

impl ShapeSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_min > 0.0 && self.eps_min < self.eps_max && self.eps_max.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "shape interval must satisfy 0 < eps_min < eps_max, got [{}, {}]",
                self.eps_min, self.eps_max
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_evals < 10 {
            return Err(Error::InvalidConfig(format!(
                "max_evals must be at least 10, got {}",
                self.max_evals
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MpleResult {
    pub eps_opt: f64,
    pub cost_opt: f64,
    /// Profile-optimal process variance `yᵀA⁻¹y / N` at `eps_opt`.
    pub sigma2_opt: f64,
    /// Number of cost evaluations spent.
    pub evals: usize,
}

/// MPLE cost of a fixed node set and data vector as a function of `ε`.
///
/// Pairwise distances are computed once, so repeated evaluations only pay
/// for matrix assembly and factorization.
#[derive(Debug, Clone)]
pub struct MpleObjective<'a> {
    family: KernelFamily,
    n: usize,
    distances: Vec<f64>,
    values: &'a [f64],
}

impl<'a> MpleObjective<'a> {
    pub fn new(family: KernelFamily, nodes: &PointSet, values: &'a [f64]) -> Result<Self> {
        if values.len() != nodes.len() {
            return Err(Error::DimensionMismatch {
                expected: nodes.len(),
                found: values.len(),
            });
        }
        if nodes.is_empty() {
            return Err(Error::EmptyEvaluationSet);
        }
        if values.iter().all(|&v| v == 0.0) {
            return Err(Error::AllZeroValues);
        }
        Ok(Self {
            family,
            n: nodes.len(),
            distances: pairwise_distances(nodes, DEFAULT_SEPARATION_FLOOR)?,
            values,
        })
    }

    pub fn factor(&self, eps: f64) -> Result<CholeskyFactor> {
        let spec = KernelSpec::new(self.family, eps)?;
        cholesky(&kernel_matrix_from_distances(&spec, self.n, &self.distances))
    }

    /// Cost at `ε`, or `+∞` when the kernel matrix is numerically singular.
    pub fn cost(&self, eps: f64) -> f64 {
        match self.factor(eps) {
            Ok(factor) => cost_from_factor(&factor, self.values),
            Err(_) => f64::INFINITY,
        }
    }
}

fn cost_from_factor(factor: &CholeskyFactor, values: &[f64]) -> f64 {
    let quad = factor
        .inverse_quadratic_form(values)
        .expect("factor and data have matching lengths");
    if !(quad > 0.0 && quad.is_finite()) {
        return f64::INFINITY;
    }
    let cost = values.len() as f64 * quad.ln() + factor.log_det();
    if cost.is_nan() {
        f64::INFINITY
    } else {
        cost
    }
}

/// `N log(yᵀA⁻¹y) + log det A` for the kernel matrix at shape `eps`;
/// `+∞` when the matrix is numerically singular.
pub fn mple_cost(family: KernelFamily, eps: f64, nodes: &PointSet, values: &[f64]) -> Result<f64> {
    KernelSpec::new(family, eps)?;
    Ok(MpleObjective::new(family, nodes, values)?.cost(eps))
}

/// `σ²_opt = yᵀA⁻¹y / N`.
pub fn optimal_variance(factor: &CholeskyFactor, values: &[f64]) -> Result<f64> {
    Ok(factor.inverse_quadratic_form(values)? / factor.n() as f64)
}

/// `n` log-spaced points on `[lo, hi]` with both endpoints exact.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (la, lb) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| match i {
                    0 => lo,
                    _ if i == n - 1 => hi,
                    _ => (la + (lb - la) * i as f64 / (n - 1) as f64).exp().clamp(lo, hi),
                })
                .collect()
        }
    }
}

/// Cost sampled on a log-spaced grid; `+∞` entries mark singular matrices.
pub fn scan_cost(
    family: KernelFamily,
    nodes: &PointSet,
    values: &[f64],
    eps_min: f64,
    eps_max: f64,
    points: usize,
) -> Result<Vec<(f64, f64)>> {
    if !(eps_min > 0.0 && eps_min < eps_max) {
        return Err(Error::InvalidConfig(format!(
            "shape interval must satisfy 0 < eps_min < eps_max, got [{eps_min}, {eps_max}]"
        )));
    }
    let objective = MpleObjective::new(family, nodes, values)?;
    Ok(log_spaced(eps_min, eps_max, points)
        .into_iter()
        .map(|eps| (eps, objective.cost(eps)))
        .collect())
}

/// Picks the shape parameter minimizing the MPLE cost on `[eps_min, eps_max]`.
///
/// A log-spaced probe grid locates the best basin, then Brent's method refines
/// within the neighbouring grid cells in `ln ε`. The returned cost is never
/// worse than the best probe.
pub fn select_shape(
    family: KernelFamily,
    nodes: &PointSet,
    values: &[f64],
    cfg: &ShapeSearchConfig,
) -> Result<MpleResult> {
    cfg.validate()?;
    let objective = MpleObjective::new(family, nodes, values)?;

    let grid = log_spaced(cfg.eps_min, cfg.eps_max, PROBE_POINTS.min(cfg.max_evals));
    let costs: Vec<f64> = grid.iter().map(|&eps| objective.cost(eps)).collect();
    let mut evals = grid.len();

    let best = costs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .ok_or(Error::NoAdmissibleShape {
            eps_min: cfg.eps_min,
            eps_max: cfg.eps_max,
        })?;

    let (mut eps_opt, mut cost_opt) = (grid[best], costs[best]);
    let budget = cfg.max_evals - evals;
    if budget > 0 {
        let lo = grid[best.saturating_sub(1)].ln();
        let hi = grid[(best + 1).min(grid.len() - 1)].ln();
        let local = minimize_bounded(
            |t| objective.cost(t.exp().clamp(cfg.eps_min, cfg.eps_max)),
            lo,
            hi,
            cfg.tol,
            budget,
        );
        evals += local.evals;
        if local.fx < cost_opt {
            eps_opt = local.x.exp().clamp(cfg.eps_min, cfg.eps_max);
            cost_opt = local.fx;
        }
    }

    let factor = objective.factor(eps_opt)?;
    Ok(MpleResult {
        eps_opt,
        cost_opt,
        sigma2_opt: optimal_variance(&factor, values)?,
        evals,
    })
}
