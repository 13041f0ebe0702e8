use crate::error::{Error, Result};
use crate::interpolant::{evaluation_grid_1d, linspace};
use crate::points::PointSet;

use super::{Changes, NodeStructure, Removal, Thresholds};

/// Sorted nodes on `[a, b]`, endpoints always present.
///
/// Check points are the midpoints of consecutive nodes. An interior node is
/// coarsened only when the check residuals on both sides of it are below the
/// coarsening threshold; the endpoints are never removed.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet1D {
    a: f64,
    b: f64,
    xs: Vec<f64>,
}

impl NodeSet1D {
    /// `n0` equispaced nodes including both endpoints.
    pub fn initial(a: f64, b: f64, n0: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidDomain { a, b });
        }
        if n0 < 3 {
            return Err(Error::InvalidConfig(format!("need at least 3 initial nodes, got {n0}")));
        }
        Ok(Self {
            a,
            b,
            xs: linspace(a, b, n0),
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    /// Midpoints `0.5 (x_i + x_{i+1})`.
    pub fn midpoints(&self) -> Vec<f64> {
        self.xs.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

impl NodeStructure for NodeSet1D {
    fn dim(&self) -> usize {
        1
    }

    fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    fn nodes(&self) -> PointSet {
        PointSet::from_1d(&self.xs)
    }

    fn check_points(&self) -> (PointSet, Vec<usize>) {
        let mids = self.midpoints();
        let owners = (0..mids.len()).collect();
        (PointSet::from_1d(&mids), owners)
    }

    fn update(&self, residuals: &[f64], th: &Thresholds) -> (Self, Changes) {
        let n = self.xs.len();
        assert_eq!(residuals.len(), n - 1, "one residual per midpoint");
        let mut changes = Changes::default();

        let mut remove = vec![false; n];
        for i in 1..n - 1 {
            if residuals[i - 1] < th.coarse && residuals[i] < th.coarse {
                remove[i] = true;
                changes.removed.push(Removal {
                    node: vec![self.xs[i]],
                    checks: vec![i - 1, i],
                });
            }
        }

        let mut xs = Vec::with_capacity(n + residuals.len());
        for i in 0..n {
            if !remove[i] {
                xs.push(self.xs[i]);
            }
            if i + 1 < n && residuals[i] > th.refine {
                let half_gap = 0.5 * (self.xs[i + 1] - self.xs[i]);
                if half_gap >= th.h_min {
                    xs.push(0.5 * (self.xs[i] + self.xs[i + 1]));
                    changes.added.push(i);
                } else {
                    changes.skipped.push(i);
                }
            }
        }
        (
            Self {
                a: self.a,
                b: self.b,
                xs,
            },
            changes,
        )
    }

    fn default_h_min(&self) -> f64 {
        (self.b - self.a) * 1e-6
    }

    fn evaluation_grid(&self) -> PointSet {
        evaluation_grid_1d(self.a, self.b)
    }

    fn validate(&self, h_min: f64) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.xs.first() != Some(&self.a) || self.xs.last() != Some(&self.b) {
            return bad("endpoints missing from 1D node set".into());
        }
        for w in self.xs.windows(2) {
            if !(w[1] > w[0]) {
                return bad(format!("nodes not strictly increasing at {} / {}", w[0], w[1]));
            }
            // Tolerate rounding when a gap was halved down to exactly h_min.
            if w[1] - w[0] < h_min * (1.0 - 1e-9) {
                return bad(format!("gap {} below h_min {h_min}", w[1] - w[0]));
            }
        }
        Ok(())
    }
}
