use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use krylov_restart::solver::arnoldi;
use krylov_restart::{solve, Method};
use krylov_restart_bench::{config, Workload};

fn spmv(c: &mut Criterion) {
    let mut group = c.benchmark_group("spmv");
    for nx in [32, 128] {
        let w = Workload::new(nx);
        let x = vec![1.0; w.n()];
        let mut y = vec![0.0; w.n()];
        group.bench_with_input(BenchmarkId::from_parameter(w.n()), &w, |bch, w| {
            bch.iter(|| w.a.spmv_into(black_box(&x), &mut y).unwrap())
        });
    }
    group.finish();
}

fn arnoldi_cycle(c: &mut Criterion) {
    let w = Workload::new(64);
    let mut group = c.benchmark_group("arnoldi");
    for m in [10, 30] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |bch, &m| {
            bch.iter(|| arnoldi(&w.a, black_box(&w.b), m).unwrap())
        });
    }
    group.finish();
}

fn methods(c: &mut Criterion) {
    let w = Workload::new(48);
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    for method in Method::ALL {
        let cfg = config(method);
        group.bench_function(method.as_str(), |bch| {
            bch.iter(|| solve(&w.a, black_box(&w.b), &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, spmv, arnoldi_cycle, methods);
criterion_main!(benches);
