//! Parallel vs sequential sweep throughput on a realistic noise surface.
//!
//! Run with `cargo bench -p su11-core`. The parallel path is only compiled
//! with the default `parallel` feature; without it both benches measure the
//! same sequential code.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use su11_core::bound::{gamma_lambda_closed_form, NoiseParams};
use su11_core::exec;
use su11_core::gaussian::{moments_after_nbs, InputSpec, PumpSpec};

fn surface_point(idx: usize, n_beta: usize, etas: &[f64], betas: &[f64]) -> f64 {
    let spec = InputSpec::new(0.5_f64.exp() / 2.0, 0.0, 1.0, 0.0).unwrap();
    let pump = PumpSpec::new(2.0, 0.0).unwrap();
    let m = moments_after_nbs(&spec, &pump);
    let noise = NoiseParams {
        eta_a: etas[idx / n_beta],
        eta_b: etas[idx / n_beta],
        beta_a: betas[idx % n_beta],
        beta_b: betas[idx % n_beta],
    };
    gamma_lambda_closed_form(&m, &noise).unwrap().delta_phi
}

fn bench_surface(c: &mut Criterion) {
    let etas = exec::linspace(0.05, 1.0, 64);
    let betas = exec::linspace(0.0, 0.2, 64);
    let n = etas.len() * betas.len();

    let mut group = c.benchmark_group("noise_surface_4096");
    group.bench_function(BenchmarkId::new("map_range", "default"), |b| {
        b.iter(|| {
            black_box(exec::map_range(n, |i| {
                surface_point(black_box(i), betas.len(), &etas, &betas)
            }))
        })
    });
    group.bench_function(BenchmarkId::new("map_range_seq", "reference"), |b| {
        b.iter(|| {
            black_box(exec::map_range_seq(n, |i| {
                surface_point(black_box(i), betas.len(), &etas, &betas)
            }))
        })
    });
    group.finish();
}

criterion_group!(benches, bench_surface);
criterion_main!(benches);
