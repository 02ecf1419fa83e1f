use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qpsi_bench::{context, vwp_series};
use qpsi_core::{eval_series, Lower};

fn very_well_poised(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval_series");
    for (name, lower) in [
        ("unilateral", Lower::Zero),
        ("semi_finite_10", Lower::MinusN(10)),
        ("bilateral", Lower::Bilateral),
    ] {
        for digits in [50, 100] {
            let ctx = context(digits);
            let spec = vwp_series(lower, &ctx);
            group.bench_with_input(BenchmarkId::new(name, digits), &spec, |b, spec| {
                b.iter(|| eval_series(black_box(spec), &ctx).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, very_well_poised);
criterion_main!(benches);
