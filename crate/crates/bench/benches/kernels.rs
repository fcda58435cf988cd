use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use zsor_core::analysis::{f_map, lemma_bounds, ratio_fg};
use zsor_core::dense::dense_spectral_radius;
use zsor_core::rng::uniform_real_vector;
use zsor_core::sor::sor_sweep;
use zsor_core::HelmholtzParams;

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sor_sweep");
    for n in [80, 160] {
        let p = HelmholtzParams::new(n, 16.0 * PI, 0.5).unwrap();
        let a = p.assemble().unwrap();
        let omega = p.mu_tilde().unwrap().optimal_omega().unwrap();
        let b = uniform_real_vector(a.dim(), 0);
        let mut x = vec![Complex64::default(); a.dim()];
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| sor_sweep(&a, omega, black_box(&mut x), &b))
        });
    }
    group.finish();
}

fn matvec(c: &mut Criterion) {
    let a = HelmholtzParams::new(160, 16.0 * PI, 0.5)
        .unwrap()
        .assemble()
        .unwrap();
    let x = uniform_real_vector(a.dim(), 1);
    let mut y = vec![Complex64::default(); a.dim()];
    c.bench_function("matvec/160", |bench| {
        bench.iter(|| a.matvec_into(black_box(&x), &mut y))
    });
}

fn dense_oracle(c: &mut Criterion) {
    let p = HelmholtzParams::new(8, 2.0 * PI, 0.5).unwrap();
    let a = p.assemble().unwrap();
    let omega = p.mu_tilde().unwrap().optimal_omega().unwrap();
    c.bench_function("dense_spectral_radius/8", |bench| {
        bench.iter(|| dense_spectral_radius(black_box(&a), omega).unwrap())
    });
}

fn scalar_maps(c: &mut Criterion) {
    let z = Complex64::new(0.97, 0.03);
    c.bench_function("f_map", |bench| bench.iter(|| f_map(black_box(z))));
    c.bench_function("ratio_fg", |bench| {
        bench.iter(|| ratio_fg(black_box(z)).unwrap())
    });
    c.bench_function("lemma_bounds", |bench| {
        bench.iter(|| lemma_bounds(black_box(z)).unwrap())
    });
}

criterion_group!(benches, sweep, matvec, dense_oracle, scalar_maps);
criterion_main!(benches);
