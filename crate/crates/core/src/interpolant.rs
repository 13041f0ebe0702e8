//! Kernel interpolants: fitting, evaluation, residuals and error metrics.

use crate::error::{Error, Result};
use crate::kernels::{kernel_matrix, KernelSpec};
use crate::linalg::{cholesky, condition_number, CholeskyFactor, SymMatrix};
use crate::points::{distance, PointSet};

/// Number of equispaced points used for the 1D maximum-error grid.
pub const EVAL_GRID_1D: usize = 1000;
/// Points per side of the 2D tensor maximum-error grid.
pub const EVAL_GRID_2D: usize = 80;

/// `s(x) = Σ c_j φ_ε(‖x − x_j‖)` fitted to data at a set of nodes.
#[derive(Debug, Clone)]
pub struct Interpolant {
    spec: KernelSpec,
    nodes: PointSet,
    values: Vec<f64>,
    coeffs: Vec<f64>,
    factor: CholeskyFactor,
}

impl Interpolant {
    /// Solves `A c = y` through the Cholesky factor of the kernel matrix.
    pub fn fit(spec: KernelSpec, nodes: PointSet, values: Vec<f64>) -> Result<Self> {
        if values.len() != nodes.len() {
            return Err(Error::DimensionMismatch {
                expected: nodes.len(),
                found: values.len(),
            });
        }
        let a = kernel_matrix(&spec, &nodes)?;
        let factor = cholesky(&a)?;
        let coeffs = factor.solve(&values)?;
        Ok(Self {
            spec,
            nodes,
            values,
            coeffs,
            factor,
        })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn nodes(&self) -> &PointSet {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn factor(&self) -> &CholeskyFactor {
        &self.factor
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Value of the interpolant at a single point of matching dimension.
    pub fn value_at(&self, x: &[f64]) -> f64 {
        self.nodes
            .iter()
            .zip(&self.coeffs)
            .map(|(xj, cj)| cj * self.spec.phi(distance(x, xj)))
            .sum()
    }

    pub fn evaluate(&self, points: &PointSet) -> Result<Vec<f64>> {
        self.check_dim(points)?;
        Ok(points.iter().map(|x| self.value_at(x)).collect())
    }

    /// `|s(t) − f(t)|` at every test point.
    pub fn residuals<F>(&self, f: F, test_points: &PointSet) -> Result<Vec<f64>>
    where
        F: Fn(&[f64]) -> f64,
    {
        self.check_dim(test_points)?;
        Ok(test_points.iter().map(|t| (self.value_at(t) - f(t)).abs()).collect())
    }

    pub fn max_abs_error<F>(&self, f: F, eval_points: &PointSet) -> Result<f64>
    where
        F: Fn(&[f64]) -> f64,
    {
        if eval_points.is_empty() {
            return Err(Error::EmptyEvaluationSet);
        }
        Ok(self.residuals(f, eval_points)?.into_iter().fold(0.0, f64::max))
    }

    /// Rebuilds the kernel matrix (the stored factor is not enough to recover
    /// its spectrum cheaply).
    pub fn kernel_matrix(&self) -> SymMatrix {
        // Nodes were validated at fit time.
        kernel_matrix(&self.spec, &self.nodes).expect("nodes validated by fit")
    }

    /// Spectral condition number of the interpolation matrix.
    pub fn condition_number(&self) -> Result<f64> {
        condition_number(&self.kernel_matrix())
    }

    fn check_dim(&self, points: &PointSet) -> Result<()> {
        if points.dim() != self.nodes.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.nodes.dim(),
                found: points.dim(),
            });
        }
        Ok(())
    }
}

/// `n` equispaced points on `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { b } else { a + i as f64 * h }).collect()
        }
    }
}

/// Dense evaluation grid on `[a, b]` used for the maximum absolute error.
pub fn evaluation_grid_1d(a: f64, b: f64) -> PointSet {
    PointSet::from_1d(&linspace(a, b, EVAL_GRID_1D))
}

/// Tensor evaluation grid on `[a, b]²`, row by row in `y`.
pub fn evaluation_grid_2d(a: f64, b: f64) -> PointSet {
    let axis = linspace(a, b, EVAL_GRID_2D);
    let mut pts = PointSet::empty(2);
    for &y in &axis {
        for &x in &axis {
            pts.push(&[x, y]);
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelFamily;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn spec(family: KernelFamily, eps: f64) -> KernelSpec {
        KernelSpec::new(family, eps).unwrap()
    }

    fn runge(x: &[f64]) -> f64 {
        1.0 / (1.0 + 25.0 * x[0] * x[0])
    }

    #[test]
    fn single_node_fit() {
        let s = Interpolant::fit(spec(KernelFamily::Ga, 3.0), PointSet::from_1d(&[0.0]), vec![5.0]).unwrap();
        assert_eq!(s.coeffs(), &[5.0]);

        let s = Interpolant::fit(spec(KernelFamily::M6, 1.0), PointSet::from_1d(&[0.0]), vec![3.0]).unwrap();
        assert_relative_eq!(s.coeffs()[0], 0.2, epsilon = 1e-15);
    }

    #[test]
    fn two_node_fit_closed_form() {
        let s = Interpolant::fit(
            spec(KernelFamily::Ga, 1.0),
            PointSet::from_1d(&[-1.0, 1.0]),
            vec![1.0, 1.0],
        )
        .unwrap();
        let a = (-4f64).exp();
        for c in s.coeffs() {
            assert_relative_eq!(*c, 1.0 / (1.0 + a), epsilon = 1e-15);
        }
    }

    #[test]
    fn evaluate_single_node() {
        let s = Interpolant::fit(spec(KernelFamily::Ga, 1.0), PointSet::from_1d(&[0.0]), vec![5.0]).unwrap();
        let v = s.evaluate(&PointSet::from_1d(&[1.0])).unwrap();
        assert_relative_eq!(v[0], 5.0 * (-1f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(v[0], 1.839397, epsilon = 1e-6);
    }

    #[test]
    fn zero_data_gives_zero_interpolant() {
        let nodes = PointSet::from_1d(&linspace(-1.0, 1.0, 7));
        let s = Interpolant::fit(spec(KernelFamily::M4, 2.0), nodes, vec![0.0; 7]).unwrap();
        let grid = evaluation_grid_1d(-1.0, 1.0);
        assert!(s.evaluate(&grid).unwrap().iter().all(|&v| v == 0.0));
        assert_eq!(s.max_abs_error(|_| 0.0, &grid).unwrap(), 0.0);
        assert!(s.residuals(|_| 0.0, &grid).unwrap().iter().all(|&r| r == 0.0));
    }

    #[test]
    fn residual_matches_direct_sum() {
        let xs = linspace(-1.0, 1.0, 5);
        let ys: Vec<f64> = xs.iter().map(|&x| runge(&[x])).collect();
        let s = Interpolant::fit(spec(KernelFamily::Ga, 2.0), PointSet::from_1d(&xs), ys).unwrap();
        // Re-evaluate Σ c_j exp(−4 (t − x_j)²) by hand.
        let t = 0.1;
        let direct: f64 = xs
            .iter()
            .zip(s.coeffs())
            .map(|(&xj, cj)| cj * (-4.0 * (t - xj) * (t - xj)).exp())
            .sum();
        let r = s.residuals(runge, &PointSet::from_1d(&[t])).unwrap();
        assert_relative_eq!(r[0], (direct - runge(&[t])).abs(), max_relative = 1e-12);
    }

    #[test]
    fn reproduces_data_at_nodes() {
        let xs = linspace(-1.0, 1.0, 13);
        let ys: Vec<f64> = xs.iter().map(|&x| runge(&[x])).collect();
        let nodes = PointSet::from_1d(&xs);
        for family in KernelFamily::ALL {
            let s = Interpolant::fit(spec(family, 3.0), nodes.clone(), ys.clone()).unwrap();
            let r = s.residuals(runge, &nodes).unwrap();
            assert!(r.iter().all(|&v| v <= 1e-6 * 2.0), "{family}: {r:?}");
        }
    }

    #[test]
    fn max_error_dominates_subset_residuals() {
        let xs = linspace(-1.0, 1.0, 9);
        let ys: Vec<f64> = xs.iter().map(|&x| runge(&[x])).collect();
        let s = Interpolant::fit(spec(KernelFamily::M2, 2.0), PointSet::from_1d(&xs), ys).unwrap();
        let grid = evaluation_grid_1d(-1.0, 1.0);
        let mae = s.max_abs_error(runge, &grid).unwrap();
        let subset = grid.permuted(&(0..grid.len()).step_by(7).collect::<Vec<_>>());
        assert!(s.residuals(runge, &subset).unwrap().iter().all(|&r| r <= mae));
    }

    #[test]
    fn error_paths() {
        let s = Interpolant::fit(spec(KernelFamily::Ga, 1.0), PointSet::from_1d(&[0.0]), vec![1.0]).unwrap();
        assert_eq!(
            s.max_abs_error(|_| 0.0, &PointSet::empty(1)).unwrap_err(),
            Error::EmptyEvaluationSet
        );
        assert!(matches!(
            s.evaluate(&PointSet::from_2d(&[[0.0, 0.0]])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            Interpolant::fit(spec(KernelFamily::Ga, 1.0), PointSet::from_1d(&[0.0, 1.0]), vec![1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            Interpolant::fit(
                spec(KernelFamily::Ga, 1.0),
                PointSet::from_1d(&[0.0, 0.0]),
                vec![1.0, 1.0]
            ),
            Err(Error::DuplicateNodes { .. })
        ));
        // Flat limit of the Gaussian on many nodes is numerically singular.
        let xs = linspace(-1.0, 1.0, 40);
        assert!(matches!(
            Interpolant::fit(spec(KernelFamily::Ga, 0.01), PointSet::from_1d(&xs), vec![1.0; 40]),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn grids() {
        let g = evaluation_grid_1d(-1.0, 1.0);
        assert_eq!(g.len(), 1000);
        assert_eq!(g.point(0), &[-1.0]);
        assert_eq!(g.point(999), &[1.0]);
        let g = evaluation_grid_2d(-1.0, 1.0);
        assert_eq!(g.len(), 6400);
        assert_eq!(g.point(6399), &[1.0, 1.0]);
    }

    proptest! {
        #[test]
        fn linear_in_data(alpha in -50.0f64..50.0, eps in 1.0f64..6.0, fam in 0usize..5) {
            let xs = linspace(-1.0, 1.0, 9);
            let ys: Vec<f64> = xs.iter().map(|&x| (3.0 * x).sin() + 0.5).collect();
            let scaled: Vec<f64> = ys.iter().map(|y| alpha * y).collect();
            let sp = spec(KernelFamily::ALL[fam], eps);
            let s1 = Interpolant::fit(sp, PointSet::from_1d(&xs), ys).unwrap();
            let s2 = Interpolant::fit(sp, PointSet::from_1d(&xs), scaled).unwrap();
            let scale = s1.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
            for (c1, c2) in s1.coeffs().iter().zip(s2.coeffs()) {
                prop_assert!((alpha * c1 - c2).abs() <= 1e-10 * alpha.abs().max(1.0) * scale);
            }
        }

        #[test]
        fn node_order_does_not_matter(
            rot in 0usize..12,
            q in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5),
        ) {
            let mut pts = Vec::new();
            for i in 0..4 {
                for j in 0..3 {
                    pts.push([-0.9 + 0.6 * i as f64, -0.8 + 0.8 * j as f64]);
                }
            }
            let f = |p: &[f64]| (p[0] * p[1]).cos() + p[0];
            let nodes = PointSet::from_2d(&pts);
            let ys: Vec<f64> = nodes.iter().map(f).collect();
            let order: Vec<usize> = (0..pts.len()).map(|i| (i * 5 + rot) % pts.len()).collect();
            let sp = spec(KernelFamily::M4, 2.5);
            let s1 = Interpolant::fit(sp, nodes.clone(), ys.clone()).unwrap();
            let s2 = Interpolant::fit(
                sp,
                nodes.permuted(&order),
                order.iter().map(|&i| ys[i]).collect(),
            )
            .unwrap();
            let query = PointSet::from_2d(&q.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>());
            let v1 = s1.evaluate(&query).unwrap();
            let v2 = s2.evaluate(&query).unwrap();
            for (a, b) in v1.iter().zip(&v2) {
                prop_assert!((a - b).abs() <= 1e-10);
            }
        }
    }
}
