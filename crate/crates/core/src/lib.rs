//! Adaptive radial basis function interpolation in one and two dimensions.
//!
//! The shape parameter of the kernel is chosen automatically at every
//! adaptive iteration by minimizing a profile-likelihood cost, and the node
//! set is refined and coarsened by residual sub-sampling until every check
//! residual falls below the refinement threshold.
//!
//! ```
//! use rbf_adapt::{run_adaptive_1d, AdaptiveConfig, KernelFamily, TargetFunction};
//!
//! let f = TargetFunction::F1;
//! let cfg = AdaptiveConfig::new(1e-4, 1e-8);
//! let run = run_adaptive_1d(|x| f.value(x), f.domain(), 13, KernelFamily::M4, &cfg).unwrap();
//! assert!(run.converged);
//! assert!(run.mae < 1e-3);
//! ```

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adaptive;
pub mod error;
pub mod interpolant;
pub mod kernels;
pub mod linalg;
pub mod mple;
pub mod optimize;
pub mod points;
pub mod targets;

pub use adaptive::{
    adapt_step, run_adaptive, run_adaptive_1d, run_adaptive_2d, run_adaptive_observed, AdaptiveConfig, Changes,
    IterationRecord, NodeSet1D, NodeSet2D, NodeStructure, Removal, RunResult, Step, Thresholds,
};
pub use error::{Error, Result};
pub use interpolant::{evaluation_grid_1d, evaluation_grid_2d, linspace, Interpolant};
pub use kernels::{kernel_matrix, phi, KernelFamily, KernelSpec};
pub use linalg::{cholesky, condition_number, symmetric_eigenvalues, CholeskyFactor, SymMatrix};
pub use mple::{mple_cost, optimal_variance, scan_cost, select_shape, MpleObjective, MpleResult, ShapeSearchConfig};
pub use points::PointSet;
pub use targets::{preset, Preset, PresetRow, TargetFunction};
