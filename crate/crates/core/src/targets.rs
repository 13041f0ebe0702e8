//! Benchmark target functions and the experiment presets built on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::KernelFamily;

/// Tolerance when checking that a point lies in the canonical domain.
const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetFunction {
    /// Runge function `1 / (1 + 25x²)`.
    F1,
    /// `tanh(60x − 0.01)`, a steep front near the origin.
    F2,
    /// `(3/8) cos⁴((x+1)² − 3)`.
    F3,
    /// Franke-type sum of four Gaussian bumps.
    F4,
    /// `−0.4 tanh(20xy) + 0.6`.
    F5,
    /// Sharp Gaussian peak at `(0.35, 0.25)` on a `0.2` pedestal.
    F6,
}

impl TargetFunction {
    pub const ALL: [TargetFunction; 6] = [Self::F1, Self::F2, Self::F3, Self::F4, Self::F5, Self::F6];

    pub fn name(self) -> &'static str {
        match self {
            Self::F1 => "f1",
            Self::F2 => "f2",
            Self::F3 => "f3",
            Self::F4 => "f4",
            Self::F5 => "f5",
            Self::F6 => "f6",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Self::F1 | Self::F2 | Self::F3 => 1,
            Self::F4 | Self::F5 | Self::F6 => 2,
        }
    }

    /// Canonical domain `[a, b]` (per axis).
    pub fn domain(self) -> (f64, f64) {
        (-1.0, 1.0)
    }

    /// Evaluates the target, rejecting points outside its domain.
    pub fn eval(self, p: &[f64]) -> Result<f64> {
        let (a, b) = self.domain();
        let inside = p.len() == self.dim() && p.iter().all(|&c| c >= a - DOMAIN_SLACK && c <= b + DOMAIN_SLACK);
        if !inside {
            return Err(Error::OutOfDomain { point: p.to_vec() });
        }
        Ok(self.value(p))
    }

    /// Evaluates without the domain check. Panics on a dimension mismatch.
    pub fn value(self, p: &[f64]) -> f64 {
        match self {
            Self::F1 => 1.0 / (1.0 + 25.0 * p[0] * p[0]),
            Self::F2 => (60.0 * p[0] - 0.01).tanh(),
            Self::F3 => 0.375 * ((p[0] + 1.0).powi(2) - 3.0).cos().powi(4),
            Self::F4 => {
                let (x, y) = (p[0], p[1]);
                (-0.1 * (x * x + y * y)).exp()
                    + (-5.0 * ((x - 0.5).powi(2) + (y - 0.5).powi(2))).exp()
                    + (-15.0 * ((x + 0.2).powi(2) + (y + 0.4).powi(2))).exp()
                    + (-9.0 * ((x + 0.8).powi(2) + (y - 0.8).powi(2))).exp()
            }
            Self::F5 => -0.4 * (20.0 * p[0] * p[1]).tanh() + 0.6,
            Self::F6 => (-60.0 * ((p[0] - 0.35).powi(2) + (p[1] - 0.25).powi(2))).exp() + 0.2,
        }
    }
}

impl fmt::Display for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownTarget(s.to_string()))
    }
}

/// One experiment of a preset: a kernel at a refinement threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PresetRow {
    pub kernel: KernelFamily,
    pub theta_refine: f64,
}

/// A reproducible experiment table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub id: u32,
    pub target: TargetFunction,
    pub theta_coarse: f64,
    /// Initial node count: equispaced points in 1D, the standard layout in 2D.
    pub n0: usize,
    pub rows: Vec<PresetRow>,
}

impl Preset {
    /// Distinct kernels in row order.
    pub fn kernels(&self) -> Vec<KernelFamily> {
        let mut out: Vec<KernelFamily> = Vec::new();
        for row in &self.rows {
            if !out.contains(&row.kernel) {
                out.push(row.kernel);
            }
        }
        out
    }
}

/// Table ids with a preset.
pub const PRESET_IDS: [u32; 12] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12];

/// Experiment configuration for a results table.
///
/// Tables 1–3 and 7–9 run several kernels at one threshold; tables 4–6 and
/// 10–12 sweep the refinement threshold for a single kernel.
pub fn preset(id: u32) -> Result<Preset> {
    use KernelFamily::*;
    use TargetFunction::*;

    let kernel_rows = |kernels: &[KernelFamily], theta: f64| -> Vec<PresetRow> {
        kernels
            .iter()
            .map(|&kernel| PresetRow {
                kernel,
                theta_refine: theta,
            })
            .collect()
    };
    let sweep = |kernel: KernelFamily, thetas: &[f64]| -> Vec<PresetRow> {
        thetas
            .iter()
            .map(|&theta_refine| PresetRow { kernel, theta_refine })
            .collect()
    };
    const KERNELS_1D: [KernelFamily; 4] = [Imq, M6, M4, M2];
    const KERNELS_2D: [KernelFamily; 3] = [Imq, M6, M4];

    let (target, theta_coarse, rows) = match id {
        1 => (F1, 1e-8, kernel_rows(&KERNELS_1D, 1e-6)),
        2 => (F2, 1e-8, kernel_rows(&KERNELS_1D, 1e-5)),
        3 => (F3, 1e-8, kernel_rows(&KERNELS_1D, 1e-5)),
        4 => (F1, 1e-9, sweep(M6, &[1e-4, 1e-5, 1e-6, 1e-7])),
        5 => (F2, 1e-8, sweep(M6, &[1e-3, 1e-4, 1e-5, 1e-6])),
        6 => (F3, 1e-8, sweep(M6, &[1e-3, 1e-4, 1e-5, 1e-6])),
        7 => (F4, 1e-8, kernel_rows(&KERNELS_2D, 1e-4)),
        8 => (F5, 1e-8, kernel_rows(&KERNELS_2D, 1e-3)),
        9 => (F6, 1e-8, kernel_rows(&KERNELS_2D, 1e-5)),
        10 => (F4, 1e-8, sweep(Imq, &[1e-4, 5e-5, 1e-5, 5e-6, 1e-6])),
        11 => (F5, 1e-8, sweep(M2, &[1e-3, 8e-4, 6e-4, 4e-4, 2e-4, 1e-4])),
        12 => (F6, 1e-8, sweep(M6, &[1e-3, 5e-4, 1e-4, 5e-5, 1e-5])),
        _ => return Err(Error::UnknownPreset(id.to_string())),
    };
    let n0 = if target.dim() == 1 { 13 } else { 320 };
    Ok(Preset {
        id,
        target,
        theta_coarse,
        n0,
        rows,
    })
}
