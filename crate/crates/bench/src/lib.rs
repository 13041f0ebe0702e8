//! Shared fixtures for the benchmarks.

use rbf_adapt::{linspace, KernelFamily, KernelSpec, NodeSet2D, NodeStructure, PointSet, SymMatrix, TargetFunction};

/// `n` equispaced nodes on [-1, 1] with Runge data.
pub fn runge_nodes(n: usize) -> (PointSet, Vec<f64>) {
    let xs = linspace(-1.0, 1.0, n);
    let values = xs.iter().map(|&x| TargetFunction::F1.value(&[x])).collect();
    (PointSet::from_1d(&xs), values)
}

/// The standard 320-node 2D layout with data from `target`.
pub fn square_nodes(target: TargetFunction) -> (PointSet, Vec<f64>) {
    let nodes = NodeSet2D::initial(-1.0, 1.0).expect("valid square").nodes();
    let values = nodes.iter().map(|p| target.value(p)).collect();
    (nodes, values)
}

/// M4 kernel matrix on `n` equispaced 1D nodes, well conditioned at this shape.
pub fn m4_matrix(n: usize) -> SymMatrix {
    let (nodes, _) = runge_nodes(n);
    let spec = KernelSpec::new(KernelFamily::M4, 0.5 * n as f64).expect("positive shape");
    rbf_adapt::kernel_matrix(&spec, &nodes).expect("distinct nodes")
}
