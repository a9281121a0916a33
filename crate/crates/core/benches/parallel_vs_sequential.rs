use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fujita_core::certificates::gaussian::{gaussian_certificate, supersolution_residual};
use fujita_core::exec::Execution;
use fujita_core::scan::{run_scan, ScanSpec};

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn lattice_residual(c: &mut Criterion) {
    let cert = gaussian_certificate(1, 4.0, 2.0, 1.0).unwrap();
    let times = cert.lattice.times();
    let radii = cert.lattice.radii();
    let mut group = c.benchmark_group("lattice_residual_400x400");
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| supersolution_residual(black_box(&cert), &times, &radii, exec))
        });
    }
    group.finish();
}

fn small_scan(c: &mut Criterion) {
    let mut spec = ScanSpec::lattice(1, 1.0, (2.0, 6.0), (1.2, 2.0), 4);
    spec.budget.interior = 300;
    spec.budget.t_end = 10.0;
    let mut group = c.benchmark_group("scan_4x4");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_scan(black_box(&spec), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, lattice_residual, small_scan);
criterion_main!(benches);
