use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fracstep::caputo::l1_weights;
use fracstep::harness::sine_problem;
use fracstep::mlf::MittagLeffler;
use fracstep::relax::{solve_relax, RelaxProblem, RelaxScheme};
use fracstep::{solve_diffuse, MeshStrategy};

fn weights(c: &mut Criterion) {
    let mut group = c.benchmark_group("l1_weights");
    for strategy in [MeshStrategy::PowerLaw { alpha: 0.6 }, MeshStrategy::Uniform] {
        let mesh = strategy.build(20.0, 1000).unwrap();
        group.bench_function(BenchmarkId::new(strategy.label(), 999), |b| {
            b.iter(|| l1_weights(black_box(&mesh), 0.6, 999).unwrap())
        });
    }
    group.finish();
}

fn relaxation(c: &mut Criterion) {
    let p = RelaxProblem::new(0.5, 10.0, 1.0, 20.0).unwrap();
    let mut group = c.benchmark_group("relax");
    for scheme in [
        RelaxScheme::SfdmImplicit,
        RelaxScheme::UniformImplicit,
        RelaxScheme::SfdmExplicitVolterra,
    ] {
        for n in [100, 400] {
            group.bench_with_input(BenchmarkId::new(scheme.label(), n), &n, |b, &n| {
                b.iter(|| solve_relax(black_box(&p), scheme, n).unwrap())
            });
        }
    }
    group.finish();
}

/// Equal-accuracy pair at α = 0.4, T = 500: 150 power-law steps against
/// uniform steps of 0.1 (truncated to 1000 to keep sampling short).
fn diffusion(c: &mut Criterion) {
    let p = sine_problem(0.4, 500.0, 100).unwrap();
    let mut group = c.benchmark_group("diffuse");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("power-law", 150), |b| {
        b.iter(|| solve_diffuse(black_box(&p), MeshStrategy::PowerLaw { alpha: 0.4 }, 150).unwrap())
    });
    group.bench_function(BenchmarkId::new("uniform", 1000), |b| {
        b.iter(|| solve_diffuse(black_box(&p), MeshStrategy::Uniform, 1000).unwrap())
    });
    group.finish();
}

fn mittag_leffler(c: &mut Criterion) {
    let mut group = c.benchmark_group("mittag_leffler");
    let e = MittagLeffler::new(0.6).unwrap();
    for z in [-1.0, -12.0, -200.0] {
        group.bench_with_input(BenchmarkId::new("alpha_0.6", z), &z, |b, &z| {
            b.iter(|| e.eval(black_box(z)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, weights, relaxation, diffusion, mittag_leffler);
criterion_main!(benches);
