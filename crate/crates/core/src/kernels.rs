//! Strictly positive definite radial kernels and kernel matrix assembly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::points::{distance, PointSet};

/// Default minimum separation below which two nodes count as duplicates.
pub const DEFAULT_SEPARATION_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelFamily {
    /// Gaussian, C^∞.
    Ga,
    /// Inverse multiquadric, C^∞.
    Imq,
    /// Matérn C^6.
    M6,
    /// Matérn C^4.
    M4,
    /// Matérn C^2.
    M2,
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 5] = [Self::Ga, Self::Imq, Self::M6, Self::M4, Self::M2];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ga => "ga",
            Self::Imq => "imq",
            Self::M6 => "m6",
            Self::M4 => "m4",
            Self::M2 => "m2",
        }
    }

    /// Evaluates the kernel at scaled distance `s = ε r`.
    #[inline]
    pub fn profile(self, s: f64) -> f64 {
        match self {
            Self::Ga => (-s * s).exp(),
            Self::Imq => 1.0 / (1.0 + s * s).sqrt(),
            Self::M6 => (-s).exp() * (((s + 6.0) * s + 15.0) * s + 15.0),
            Self::M4 => (-s).exp() * ((s + 3.0) * s + 3.0),
            Self::M2 => (-s).exp() * (s + 1.0),
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownKernel(s.to_string()))
    }
}

/// A kernel family together with its shape parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    family: KernelFamily,
    epsilon: f64,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidShape(epsilon));
        }
        Ok(Self { family, epsilon })
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `φ_ε(r)` for `r ≥ 0`.
    #[inline]
    pub fn phi(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        self.family.profile(self.epsilon * r)
    }
}

/// Evaluates `φ_ε(r)`, validating the shape parameter.
pub fn phi(family: KernelFamily, epsilon: f64, r: f64) -> Result<f64> {
    Ok(KernelSpec::new(family, epsilon)?.phi(r))
}

/// Interpolation matrix `A_ij = φ_ε(‖x_i − x_j‖)`.
pub fn kernel_matrix(spec: &KernelSpec, nodes: &PointSet) -> Result<SymMatrix> {
    kernel_matrix_with_floor(spec, nodes, DEFAULT_SEPARATION_FLOOR)
}

pub fn kernel_matrix_with_floor(spec: &KernelSpec, nodes: &PointSet, floor: f64) -> Result<SymMatrix> {
    let n = nodes.len();
    if n == 0 {
        return Err(Error::EmptyEvaluationSet);
    }
    let distances = pairwise_distances(nodes, floor)?;
    Ok(kernel_matrix_from_distances(spec, n, &distances))
}

/// Strict lower triangle of the distance matrix, row by row. Fails on the
/// first pair closer than `floor`.
pub(crate) fn pairwise_distances(nodes: &PointSet, floor: f64) -> Result<Vec<f64>> {
    let n = nodes.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 1..n {
        let xi = nodes.point(i);
        for j in 0..i {
            let r = distance(xi, nodes.point(j));
            if r < floor {
                return Err(Error::DuplicateNodes { first: j, second: i });
            }
            out.push(r);
        }
    }
    Ok(out)
}

/// Kernel matrix from precomputed pairwise distances (see [`pairwise_distances`]).
pub(crate) fn kernel_matrix_from_distances(spec: &KernelSpec, n: usize, distances: &[f64]) -> SymMatrix {
    let diag = spec.phi(0.0);
    SymMatrix::from_fn(n, |i, j| {
        if i == j {
            diag
        } else {
            spec.phi(distances[i * (i - 1) / 2 + j])
        }
    })
}
