use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rbf_adapt::{cholesky, select_shape, KernelFamily, ShapeSearchConfig, TargetFunction};
use rbf_adapt_bench::{m4_matrix, runge_nodes, square_nodes};

fn bench_cholesky(c: &mut Criterion) {
    let mut group = c.benchmark_group("cholesky");
    for n in [100, 400, 1000] {
        let a = m4_matrix(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| cholesky(black_box(a)).unwrap().log_det())
        });
    }
    group.finish();
}

fn bench_select_shape(c: &mut Criterion) {
    let cfg = ShapeSearchConfig::default();
    let mut group = c.benchmark_group("select_shape");
    let (nodes, values) = runge_nodes(50);
    group.bench_function("f1_50_m6", |b| {
        b.iter(|| select_shape(KernelFamily::M6, black_box(&nodes), &values, &cfg).unwrap())
    });
    let (nodes, values) = square_nodes(TargetFunction::F5);
    group.sample_size(10);
    group.bench_function("f5_320_imq", |b| {
        b.iter(|| select_shape(KernelFamily::Imq, black_box(&nodes), &values, &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_cholesky, bench_select_shape);
criterion_main!(benches);
