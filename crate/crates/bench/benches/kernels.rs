use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dualshift::graphs::product_apply;
use dualshift::linalg::{lobpcg_smallest, random_unit_vector, spmv, SolverOptions};
use dualshift::sampling::{gcs_sample_with, igcs_sample, GcsOptions, IgcsParams};
use dualshift_bench::fixture;

fn apply(c: &mut Criterion) {
    let mut g = c.benchmark_group("apply");
    for (m, n) in [(60, 40), (200, 100)] {
        let op = fixture(m, n, 1);
        let x = random_unit_vector(m * n, 2);
        g.bench_with_input(BenchmarkId::new("product", m * n), &x, |b, x| {
            b.iter(|| product_apply(&op, black_box(x)).unwrap())
        });
        let lr = op.row_graph().laplacian().clone();
        let xr = random_unit_vector(m, 3);
        g.bench_with_input(BenchmarkId::new("spmv_row", m), &xr, |b, x| {
            b.iter(|| spmv(&lr, black_box(x)).unwrap())
        });
    }
    g.finish();
}

fn eigensolve(c: &mut Criterion) {
    let mut g = c.benchmark_group("lobpcg");
    let mut op = fixture(60, 40, 4);
    let opts = SolverOptions::sampler_default();
    let first = lobpcg_smallest(&op, &random_unit_vector(2400, 5), &opts).unwrap();
    op.add_sample(1234).unwrap();
    g.bench_function("warm", |b| {
        b.iter(|| lobpcg_smallest(&op, black_box(&first.pair.vec), &opts).unwrap())
    });
    let cold = random_unit_vector(2400, 6);
    g.bench_function("cold", |b| {
        b.iter(|| lobpcg_smallest(&op, black_box(&cold), &opts).unwrap())
    });
    g.finish();
}

fn samplers(c: &mut Criterion) {
    let mut g = c.benchmark_group("sampler");
    g.sample_size(10);
    let mut op = fixture(30, 20, 7);
    op.clear_samples();
    let opts = GcsOptions::default();
    g.bench_function("gcs", |b| {
        b.iter(|| gcs_sample_with(op.clone(), 30, None, &opts).unwrap())
    });
    for zeta in [1, 5] {
        let p = IgcsParams {
            zeta,
            ..IgcsParams::default()
        };
        g.bench_function(BenchmarkId::new("igcs", zeta), |b| {
            b.iter(|| igcs_sample(op.row_graph(), op.col_graph(), &p, 30, None, None).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, apply, eigensolve, samplers);
criterion_main!(benches);
