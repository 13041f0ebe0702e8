use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rbf_adapt::{AdaptiveConfig, KernelFamily, ShapeSearchConfig, TargetFunction};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "rbf-adapt", version, about = "Adaptive RBF interpolation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one adaptive experiment and write a JSON report.
    Run(RunArgs),
    /// Reproduce a results table as CSV.
    Table(TableArgs),
    /// Sample the shape-parameter cost on a log-spaced grid.
    MpleScan(ScanArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ShapeArgs {
    #[arg(long, default_value_t = 1e-2)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 1e2)]
    pub eps_max: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub target: String,
    #[arg(long)]
    pub kernel: String,
    #[arg(long)]
    pub theta_refine: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub theta_coarse: f64,
    #[arg(long, default_value_t = 20)]
    pub max_iter: usize,
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Brent tolerance in ln(eps).
    #[arg(long, default_value_t = 1e-3)]
    pub eps_tol: f64,
    /// Cost evaluations per shape search.
    #[arg(long, default_value_t = 100)]
    pub eps_max_evals: usize,
    /// Initial node count. 1D only; 2D always starts from the 320-node layout.
    #[arg(long)]
    pub n0: Option<usize>,
    /// JSON report path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV dump of the final nodes.
    #[arg(long)]
    pub nodes: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub id: u32,
    /// CSV path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub target: String,
    #[arg(long)]
    pub kernel: String,
    #[arg(long)]
    pub n0: Option<usize>,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, default_value_t = 33)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub const DEFAULT_N0_1D: usize = 13;
pub const STANDARD_N0_2D: usize = 320;

pub fn parse_target(s: &str) -> Result<TargetFunction> {
    s.parse()
        .map_err(|_| CliError::Usage(format!("unknown target {s:?} (expected f1..f6)")))
}

pub fn parse_kernel(s: &str) -> Result<KernelFamily> {
    s.to_ascii_lowercase()
        .parse()
        .map_err(|_| CliError::Usage(format!("unknown kernel {s:?} (expected ga, imq, m6, m4 or m2)")))
}

/// Initial node count for `target`, rejecting counts the layout cannot honour.
pub fn resolve_n0(target: TargetFunction, n0: Option<usize>) -> Result<usize> {
    match (target.dim(), n0) {
        (1, None) => Ok(DEFAULT_N0_1D),
        (1, Some(n)) if n >= 3 => Ok(n),
        (1, Some(n)) => Err(CliError::Usage(format!("--n0 must be at least 3, got {n}"))),
        (_, None) => Ok(STANDARD_N0_2D),
        (_, Some(n)) if n == STANDARD_N0_2D => Ok(n),
        (_, Some(n)) => Err(CliError::Usage(format!(
            "2D targets use the fixed {STANDARD_N0_2D}-node layout, got --n0 {n}"
        ))),
    }
}

impl ShapeArgs {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_min > 0.0 && self.eps_min < self.eps_max && self.eps_max.is_finite()) {
            return Err(CliError::Usage(format!(
                "need 0 < --eps-min < --eps-max, got {} and {}",
                self.eps_min, self.eps_max
            )));
        }
        Ok(())
    }
}

impl RunArgs {
    pub fn config(&self) -> Result<AdaptiveConfig> {
        self.shape.validate()?;
        let cfg = AdaptiveConfig {
            max_iter: self.max_iter,
            shape: ShapeSearchConfig {
                eps_min: self.shape.eps_min,
                eps_max: self.shape.eps_max,
                tol: self.eps_tol,
                max_evals: self.eps_max_evals,
            },
            ..AdaptiveConfig::new(self.theta_refine, self.theta_coarse)
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}
