use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rkdg_bench::fixture;
use rkdg_core::dg::LinearMap;
use rkdg_core::rk::{step, SchemeSpec, StepForm, Variant};
use rkdg_core::spectral::fourier_cfl;

fn operator_apply(c: &mut Criterion) {
    let mut g = c.benchmark_group("apply");
    for (dim, n, k) in [(1, 320, 1), (1, 320, 3), (2, 40, 1), (2, 40, 3)] {
        let (disc, u) = fixture(dim, n, k);
        let mut out = vec![0.0; u.values().len()];
        g.bench_function(BenchmarkId::new(format!("{dim}d_p{k}"), n), |b| {
            b.iter(|| disc.full().apply(black_box(u.values()), &mut out))
        });
        g.bench_function(BenchmarkId::new(format!("{dim}d_p{k}_transpose"), n), |b| {
            b.iter(|| disc.full().apply_transpose(black_box(u.values()), &mut out))
        });
    }
    g.finish();
}

fn rk_step(c: &mut Criterion) {
    let mut g = c.benchmark_group("step");
    let (disc, u) = fixture(2, 40, 2);
    let tau = 0.1 / 80.0;
    for variant in [Variant::Standard, Variant::Sda] {
        let s = SchemeSpec::taylor(3, variant).unwrap();
        for form in [StepForm::Butcher, StepForm::Compact] {
            g.bench_function(format!("{}_{form:?}", s.label()), |b| {
                b.iter(|| step(&s, &disc, black_box(&u), tau, form).unwrap())
            });
        }
    }
    g.finish();
}

fn cfl_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("fourier_cfl");
    g.sample_size(10);
    for r in [2, 4] {
        g.bench_function(BenchmarkId::new("sdA", r), |b| {
            b.iter(|| fourier_cfl(Variant::Sda, black_box(r), r - 1).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, operator_apply, rk_step, cfl_search);
criterion_main!(benches);
