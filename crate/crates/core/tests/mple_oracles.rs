use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbf_adapt::{
    condition_number, kernel_matrix, mple_cost, optimal_variance, scan_cost, select_shape, KernelFamily, KernelSpec,
    MpleObjective, PointSet, ShapeSearchConfig, TargetFunction,
};

struct Instance {
    family: KernelFamily,
    eps: f64,
    nodes: PointSet,
    values: Vec<f64>,
}

/// Random node set in [-1, 1]^d with random data, redrawn until the kernel
/// matrix is comfortably invertible in double precision.
fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    loop {
        let dim = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=12);
        let coords: Vec<f64> = (0..n * dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let nodes = PointSet::new(dim, coords).unwrap();
        let family = KernelFamily::ALL[rng.gen_range(0..KernelFamily::ALL.len())];
        let eps = 10f64.powf(rng.gen_range(-0.3..1.0));
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let a = kernel_matrix(&KernelSpec::new(family, eps).unwrap(), &nodes);
        let Ok(a) = a else { continue };
        if condition_number(&a).is_ok_and(|k| k < 1e8) {
            return Instance {
                family,
                eps,
                nodes,
                values,
            };
        }
    }
}

fn dense(inst: &Instance) -> DMatrix<f64> {
    let a = kernel_matrix(&KernelSpec::new(inst.family, inst.eps).unwrap(), &inst.nodes).unwrap();
    DMatrix::from_fn(a.n(), a.n(), |i, j| a.get(i, j))
}

#[test]
fn cost_matches_inverse_and_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let inst = random_instance(&mut rng);
        let a = dense(&inst);
        let y = nalgebra::DVector::from_column_slice(&inst.values);
        // LU inverse: `try_inverse` uses cofactor formulas for n <= 4.
        let inv = a.clone().lu().try_inverse().unwrap();
        let quad = (y.transpose() * &inv * &y)[(0, 0)];
        let naive = inst.values.len() as f64 * quad.ln() + a.clone().lu().determinant().ln();

        let cost = mple_cost(inst.family, inst.eps, &inst.nodes, &inst.values).unwrap();
        assert!(
            (cost - naive).abs() <= 1e-8 * naive.abs().max(1.0),
            "cost {cost} vs naive {naive}"
        );

        let factor = MpleObjective::new(inst.family, &inst.nodes, &inst.values)
            .unwrap()
            .factor(inst.eps)
            .unwrap();
        let eig_log: f64 = a.symmetric_eigenvalues().iter().map(|l| l.ln()).sum();
        assert!((factor.log_det() - eig_log).abs() <= 1e-8 * eig_log.abs().max(1.0));
    }
}

#[test]
fn profile_variance_minimizes_likelihood_on_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let inst = random_instance(&mut rng);
        let obj = MpleObjective::new(inst.family, &inst.nodes, &inst.values).unwrap();
        let factor = obj.factor(inst.eps).unwrap();
        let s_opt = optimal_variance(&factor, &inst.values).unwrap();
        let quad = factor.inverse_quadratic_form(&inst.values).unwrap();
        let n = inst.values.len() as f64;
        let nll = |s2: f64| 0.5 * (n * s2.ln() + quad / s2 + factor.log_det());

        let grid: Vec<f64> = (1..=10_000).map(|i| i as f64 * 3.0 * s_opt / 10_000.0).collect();
        let argmin = (0..grid.len())
            .min_by(|&i, &j| nll(grid[i]).total_cmp(&nll(grid[j])))
            .unwrap();
        let nearest = (0..grid.len())
            .min_by(|&i, &j| (grid[i] - s_opt).abs().total_cmp(&(grid[j] - s_opt).abs()))
            .unwrap();
        let tie = (nll(grid[argmin]) - nll(grid[nearest])).abs() <= 1e-13 * nll(grid[nearest]).abs().max(1.0);
        assert!(argmin == nearest || tie, "argmin {argmin} nearest {nearest}");
    }
}

#[test]
fn scaling_data_shifts_cost_by_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let inst = random_instance(&mut rng);
        let alpha: f64 = rng.gen_range(0.1..10.0);
        let scaled: Vec<f64> = inst.values.iter().map(|v| alpha * v).collect();
        let n = inst.values.len() as f64;
        let c0 = mple_cost(inst.family, inst.eps, &inst.nodes, &inst.values).unwrap();
        let c1 = mple_cost(inst.family, inst.eps, &inst.nodes, &scaled).unwrap();
        assert!((c1 - c0 - n * (alpha * alpha).ln()).abs() <= 1e-9 * c0.abs().max(1.0));

        let cfg = ShapeSearchConfig::default();
        let r0 = select_shape(inst.family, &inst.nodes, &inst.values, &cfg).unwrap();
        let r1 = select_shape(inst.family, &inst.nodes, &scaled, &cfg).unwrap();
        assert!(
            (r0.eps_opt.ln() - r1.eps_opt.ln()).abs() <= 1e-6,
            "{} vs {}",
            r0.eps_opt,
            r1.eps_opt
        );
    }
}

#[test]
fn selected_shape_agrees_with_dense_scan() {
    let f = TargetFunction::F1;
    let xs = rbf_adapt::linspace(-1.0, 1.0, 13);
    let nodes = PointSet::from_1d(&xs);
    let values: Vec<f64> = xs.iter().map(|&x| f.value(&[x])).collect();
    let cfg = ShapeSearchConfig::default();
    let picked = select_shape(KernelFamily::M6, &nodes, &values, &cfg).unwrap();

    let scan = scan_cost(KernelFamily::M6, &nodes, &values, cfg.eps_min, cfg.eps_max, 10_000).unwrap();
    let (eps_best, cost_best) = scan
        .iter()
        .copied()
        .filter(|p| p.1.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!(picked.cost_opt <= cost_best + 1e-6 * cost_best.abs().max(1.0));
    // Grid spacing in ln(eps) is about 1e-3.
    assert!(
        (picked.eps_opt.ln() - eps_best.ln()).abs() < 5e-3,
        "{} vs {eps_best}",
        picked.eps_opt
    );
}
