use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use symtwirl::design::{caratheodory_reduce, verify_design};
use symtwirl::twirl::{uniform_twirl, uniform_twirl_orbits};
use symtwirl_bench::{dense_operator, system, uniform, LIMITS};

fn constraint_system(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_constraint_system");
    for (d, n) in [(2, 4), (2, 5), (2, 6)] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("d{d}_n{n}")), &(d, n), |b, &(d, n)| {
            b.iter(|| system(black_box(d), black_box(n)))
        });
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let sys = system(2, 6);
    let q = uniform(6);
    c.bench_function("verify_design/d2_n6", |b| b.iter(|| verify_design(black_box(&q), &sys).unwrap()));
}

fn reduce(c: &mut Criterion) {
    let sys = system(2, 5);
    let q = uniform(5);
    let mut group = c.benchmark_group("caratheodory_reduce");
    group.sample_size(10);
    group.bench_function("d2_n5", |b| b.iter(|| caratheodory_reduce(black_box(&q), &sys).unwrap()));
    group.finish();
}

fn twirl(c: &mut Criterion) {
    let mut group = c.benchmark_group("uniform_twirl");
    group.sample_size(10);
    for n in [3, 4] {
        let a = dense_operator(1 << n);
        group.bench_with_input(BenchmarkId::new("naive", n), &a, |b, a| {
            b.iter(|| uniform_twirl(a, 2, n, &LIMITS).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("orbits", n), &a, |b, a| {
            b.iter(|| uniform_twirl_orbits(a, 2, n, &LIMITS).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, constraint_system, verify, reduce, twirl);
criterion_main!(benches);
