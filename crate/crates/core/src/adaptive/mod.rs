//! Residual sub-sampling: adaptive refinement and coarsening of the node set.
//!
//! Each iteration selects a single shape parameter for the current nodes,
//! fits the interpolant, measures residuals at check points derived from the
//! node structure, then adds check points whose residual exceeds
//! `theta_refine` and removes nodes whose surrounding residuals all fall
//! below `theta_coarse`. The loop stops once an iteration changes nothing.

mod one_d;
mod two_d;

pub use one_d::NodeSet1D;
pub use two_d::NodeSet2D;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interpolant::Interpolant;
use crate::kernels::{KernelFamily, KernelSpec};
use crate::mple::{select_shape, ShapeSearchConfig};
use crate::points::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveConfig {
    pub theta_refine: f64,
    pub theta_coarse: f64,
    pub max_iter: usize,
    pub shape: ShapeSearchConfig,
    /// Minimum node spacing (1D) or cell side (2D). `None` selects the
    /// structure's default.
    pub h_min: Option<f64>,
}

impl AdaptiveConfig {
    pub fn new(theta_refine: f64, theta_coarse: f64) -> Self {
        Self {
            theta_refine,
            theta_coarse,
            max_iter: 20,
            shape: ShapeSearchConfig::default(),
            h_min: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta_coarse > 0.0 && self.theta_coarse < self.theta_refine) {
            return Err(Error::InvalidConfig(format!(
                "thresholds must satisfy 0 < theta_coarse < theta_refine, got {:e} and {:e}",
                self.theta_coarse, self.theta_refine
            )));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if let Some(h) = self.h_min {
            if !(h > 0.0) {
                return Err(Error::InvalidConfig(format!("h_min must be positive, got {h}")));
            }
        }
        self.shape.validate()
    }
}

/// Thresholds handed to a node structure when it applies an update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub refine: f64,
    pub coarse: f64,
    pub h_min: f64,
}

/// A node removed by coarsening, with the check points that justified it.
#[derive(Debug, Clone, PartialEq)]
pub struct Removal {
    pub node: Vec<f64>,
    /// Indices into the step's check points.
    pub checks: Vec<usize>,
}

/// What an update did, in terms of the check points it was given.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Changes {
    /// Check points promoted to nodes.
    pub added: Vec<usize>,
    pub removed: Vec<Removal>,
    /// Check points above the refinement threshold that were not added
    /// because the resulting spacing would drop below `h_min`.
    pub skipped: Vec<usize>,
}

/// An adaptive node layout that knows its own check points.
pub trait NodeStructure: Clone {
    fn dim(&self) -> usize;

    /// Domain `[a, b]` (per axis).
    fn domain(&self) -> (f64, f64);

    /// Current interpolation nodes, in a canonical order.
    fn nodes(&self) -> PointSet;

    /// Check points and, for each, the index (into [`nodes`](Self::nodes))
    /// of the node it is associated with.
    fn check_points(&self) -> (PointSet, Vec<usize>);

    /// Applies refinement and coarsening given residuals at
    /// [`check_points`](Self::check_points), in the same order.
    fn update(&self, residuals: &[f64], thresholds: &Thresholds) -> (Self, Changes);

    fn default_h_min(&self) -> f64;

    /// Grid on which the final maximum absolute error is measured.
    fn evaluation_grid(&self) -> PointSet;

    /// Checks the structural invariants.
    fn validate(&self, h_min: f64) -> Result<()>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub n_nodes: usize,
    pub eps_opt: f64,
    pub sigma2_opt: f64,
    pub n_refined: usize,
    pub n_coarsened: usize,
    pub n_skipped: usize,
    pub max_residual: f64,
    pub cond: f64,
}

impl IterationRecord {
    /// No node was added, removed or held back.
    pub fn is_stationary(&self) -> bool {
        self.n_refined == 0 && self.n_coarsened == 0 && self.n_skipped == 0
    }
}

/// Everything one iteration produced.
#[derive(Debug, Clone)]
pub struct Step<S> {
    pub record: IterationRecord,
    pub interpolant: Interpolant,
    pub check_points: PointSet,
    pub residuals: Vec<f64>,
    pub changes: Changes,
    pub next: S,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_interpolant: Interpolant,
    pub final_nodes: PointSet,
    pub history: Vec<IterationRecord>,
    pub mae: f64,
    /// Condition number of the final interpolation matrix.
    pub cond: f64,
    pub converged: bool,
}

impl RunResult {
    /// Number of refine/coarsen rounds: the index of the final node set on
    /// convergence, otherwise the number of iterations run.
    pub fn iterations(&self) -> usize {
        if self.converged {
            self.history.len() - 1
        } else {
            self.history.len()
        }
    }

    pub fn eps_opt(&self) -> f64 {
        self.final_interpolant.spec().epsilon()
    }
}

/// Resolved minimum spacing for `structure` under `cfg`.
pub fn h_min<S: NodeStructure>(structure: &S, cfg: &AdaptiveConfig) -> f64 {
    cfg.h_min.unwrap_or_else(|| structure.default_h_min())
}

/// One refine/coarsen iteration on `structure`.
pub fn adapt_step<S, F>(structure: &S, f: F, kernel: KernelFamily, cfg: &AdaptiveConfig, k: usize) -> Result<Step<S>>
where
    S: NodeStructure,
    F: Fn(&[f64]) -> f64,
{
    cfg.validate()?;
    let nodes = structure.nodes();
    let values: Vec<f64> = nodes.iter().map(&f).collect();

    // Zero data has no likelihood; every shape gives the zero interpolant.
    let (eps_opt, sigma2_opt) = if values.iter().all(|&v| v == 0.0) {
        ((cfg.shape.eps_min * cfg.shape.eps_max).sqrt(), 0.0)
    } else {
        let res = select_shape(kernel, &nodes, &values, &cfg.shape)?;
        (res.eps_opt, res.sigma2_opt)
    };
    let interpolant = Interpolant::fit(KernelSpec::new(kernel, eps_opt)?, nodes, values)?;

    let (check_points, _) = structure.check_points();
    let residuals = interpolant.residuals(&f, &check_points)?;
    let thresholds = Thresholds {
        refine: cfg.theta_refine,
        coarse: cfg.theta_coarse,
        h_min: h_min(structure, cfg),
    };
    let (next, changes) = structure.update(&residuals, &thresholds);
    let cond = interpolant.condition_number().unwrap_or(f64::INFINITY);

    let record = IterationRecord {
        k,
        n_nodes: interpolant.len(),
        eps_opt,
        sigma2_opt,
        n_refined: changes.added.len(),
        n_coarsened: changes.removed.len(),
        n_skipped: changes.skipped.len(),
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        cond,
    };
    Ok(Step {
        record,
        interpolant,
        check_points,
        residuals,
        changes,
        next,
    })
}

/// Runs the adaptive loop from `initial` until an iteration leaves the node
/// set unchanged or `cfg.max_iter` iterations have run.
pub fn run_adaptive<S, F>(initial: S, f: F, kernel: KernelFamily, cfg: &AdaptiveConfig) -> Result<RunResult>
where
    S: NodeStructure,
    F: Fn(&[f64]) -> f64,
{
    run_adaptive_observed(initial, f, kernel, cfg, |_| {})
}

/// [`run_adaptive`] with a callback invoked after every iteration.
pub fn run_adaptive_observed<S, F, O>(
    initial: S,
    f: F,
    kernel: KernelFamily,
    cfg: &AdaptiveConfig,
    mut observer: O,
) -> Result<RunResult>
where
    S: NodeStructure,
    F: Fn(&[f64]) -> f64,
    O: FnMut(&Step<S>),
{
    cfg.validate()?;
    let mut structure = initial;
    let mut history = Vec::new();
    let mut converged = false;
    let mut last = None;

    for k in 0..cfg.max_iter {
        let step = adapt_step(&structure, &f, kernel, cfg, k)?;
        observer(&step);
        history.push(step.record);
        let stationary = step.record.is_stationary();
        // Only skipped refinements left: nothing will ever change again.
        let stalled = step.changes.added.is_empty() && step.changes.removed.is_empty();
        structure = step.next;
        last = Some(step.interpolant);
        if stationary {
            converged = true;
            break;
        }
        if stalled {
            break;
        }
    }

    let final_interpolant = last.expect("max_iter >= 1");
    let grid = structure.evaluation_grid();
    let mae = final_interpolant.max_abs_error(&f, &grid)?;
    let cond = history.last().map_or(f64::NAN, |r| r.cond);
    Ok(RunResult {
        final_nodes: final_interpolant.nodes().clone(),
        final_interpolant,
        history,
        mae,
        cond,
        converged,
    })
}

/// Convenience wrapper: 1D run from `n0` equispaced nodes on `[a, b]`.
pub fn run_adaptive_1d<F>(
    f: F,
    domain: (f64, f64),
    n0: usize,
    kernel: KernelFamily,
    cfg: &AdaptiveConfig,
) -> Result<RunResult>
where
    F: Fn(&[f64]) -> f64,
{
    run_adaptive(NodeSet1D::initial(domain.0, domain.1, n0)?, f, kernel, cfg)
}

/// Convenience wrapper: 2D run from the standard 320-node layout on `[a, b]²`.
pub fn run_adaptive_2d<F>(f: F, domain: (f64, f64), kernel: KernelFamily, cfg: &AdaptiveConfig) -> Result<RunResult>
where
    F: Fn(&[f64]) -> f64,
{
    run_adaptive(NodeSet2D::initial(domain.0, domain.1)?, f, kernel, cfg)
}
