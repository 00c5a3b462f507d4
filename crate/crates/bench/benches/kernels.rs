use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use genhankel::kernels::{kernel_k, MeasureNu};
use genhankel::specfun::{bessel_j_norm, gauss_rule, RuleKind};
use genhankel::transform::b_kernel;
use genhankel_bench::param_sets;

fn bessel(c: &mut Criterion) {
    let mut g = c.benchmark_group("bessel_j_norm");
    for x in [0.5, 8.0, 35.0] {
        g.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| {
            b.iter(|| bessel_j_norm(black_box(1.3), black_box(x)))
        });
    }
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    let mut g = c.benchmark_group("gauss_jacobi_rule");
    for order in [32usize, 128, 512] {
        g.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &order| {
            // fresh exponent each time so the rule cache is bypassed
            let mut e = 0.25;
            b.iter(|| {
                e += 1e-9;
                gauss_rule(order, RuleKind::Jacobi(e))
            })
        });
    }
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernels");
    for p in param_sets() {
        let id = format!("n{}", p.n());
        g.bench_function(BenchmarkId::new("b_kernel", &id), |b| {
            b.iter(|| b_kernel(&p, black_box(1.7), black_box(-2.3)))
        });
        g.bench_function(BenchmarkId::new("kernel_k", &id), |b| {
            b.iter(|| kernel_k(&p, black_box(1.1), black_box(0.5), black_box(1.3)))
        });
        g.bench_function(BenchmarkId::new("product_formula", &id), |b| {
            let nu = MeasureNu::new(p, 1.1, -0.7).unwrap();
            b.iter(|| nu.integrate(&[], |z| b_kernel(&p, black_box(2.1), z)))
        });
    }
    g.finish();
}

criterion_group!(benches, bessel, quadrature, kernels);
criterion_main!(benches);
