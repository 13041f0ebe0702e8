use criterion::{criterion_group, criterion_main, Criterion};
use rbf_adapt::{run_adaptive_1d, AdaptiveConfig, KernelFamily, TargetFunction};

fn bench_runs(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_adaptive_1d");
    for (name, target, theta) in [("f1_m4", TargetFunction::F1, 1e-6), ("f2_m4", TargetFunction::F2, 1e-5)] {
        let cfg = AdaptiveConfig::new(theta, 1e-8);
        group.bench_function(name, |b| {
            b.iter(|| run_adaptive_1d(|x| target.value(x), target.domain(), 13, KernelFamily::M4, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_runs);
criterion_main!(benches);
