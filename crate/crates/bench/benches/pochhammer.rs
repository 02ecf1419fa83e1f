use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qpsi_bench::{base, context, real};
use qpsi_core::{poch_inf, poch_int};

fn infinite_product(c: &mut Criterion) {
    let mut group = c.benchmark_group("poch_inf");
    for digits in [50, 100, 200] {
        let ctx = context(digits);
        let (a, q) = (real(0.7, &ctx), base(0.3, &ctx));
        group.bench_with_input(BenchmarkId::from_parameter(digits), &digits, |b, _| {
            b.iter(|| poch_inf(black_box(&a), &q, &ctx))
        });
    }
    group.finish();
}

fn finite_product(c: &mut Criterion) {
    let ctx = context(50);
    let (a, q) = (real(0.7, &ctx), base(0.3, &ctx));
    let mut group = c.benchmark_group("poch_int");
    for k in [-20i64, 20, 200] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| poch_int(black_box(&a), k, &q, &ctx).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, infinite_product, finite_product);
criterion_main!(benches);
