use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use genhankel::harmonic_ops::{convolve, translate};
use genhankel::transform::{decompose_f_via_h, transform_f_at};
use genhankel_bench::{bump, gaussian, param_sets};

fn transforms(c: &mut Criterion) {
    let f = bump();
    let mut g = c.benchmark_group("transform");
    for p in param_sets() {
        let id = format!("n{}", p.n());
        g.bench_function(BenchmarkId::new("direct", &id), |b| {
            b.iter(|| transform_f_at(&p, &f, black_box(1.9)))
        });
        g.bench_function(BenchmarkId::new("decomposed", &id), |b| {
            b.iter(|| decompose_f_via_h(&p, &f, black_box(1.9)))
        });
    }
    g.finish();
}

fn harmonic(c: &mut Criterion) {
    let (f, h) = (bump(), gaussian());
    let mut g = c.benchmark_group("harmonic_ops");
    g.sample_size(10);
    for p in param_sets() {
        let id = format!("n{}", p.n());
        g.bench_function(BenchmarkId::new("translate", &id), |b| {
            b.iter(|| translate(&p, &f, black_box(0.9), black_box(-0.4)))
        });
        g.bench_function(BenchmarkId::new("convolve", &id), |b| {
            b.iter(|| convolve(&p, &f, &h, black_box(0.6)))
        });
    }
    g.finish();
}

criterion_group!(benches, transforms, harmonic);
criterion_main!(benches);
