use std::hint::black_box;

use angreg::inequalities::{sobolev_trace_ratio, trace_mode_constant, SobolevVariant, TraceMethod};
use angreg::modes::{Mode, RadialProfile, SpectralFunction};
use angreg::parallel::{self, Parallelism};
use angreg::transforms::{hankel_forward, Evolution, EvolutionSettings, RadialGrid, Spacing};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Parallelism); 2] = [("serial", Parallelism::Serial), ("parallel", Parallelism::Parallel)];

fn trace_quadrature(c: &mut Criterion) {
    let tuples: Vec<(u32, f64, u32)> = (0..=20).map(|k| (3, 1.75, k)).collect();
    let mut g = c.benchmark_group("trace_quadrature");
    g.sample_size(10);
    for (name, par) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                parallel::map(&tuples, par, |&(n, b, k)| {
                    trace_mode_constant(n, b, k, TraceMethod::Quadrature).unwrap()
                })
            })
        });
    }
    g.finish();
}

fn hankel(c: &mut Criterion) {
    let f = RadialProfile::gaussian(1.0, 2, 0.8).unwrap();
    let mode = Mode::new(3, 2).unwrap();
    let mut g = c.benchmark_group("hankel_forward");
    for (name, par) in MODES {
        let grid = RadialGrid::new(1e-4, 20.0, 512, Spacing::Logarithmic).unwrap().with_parallelism(par);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| hankel_forward(black_box(&f), &mode, &grid).unwrap())
        });
    }
    g.finish();
}

fn evolution(c: &mut Criterion) {
    let f = SpectralFunction::single(3, 1, RadialProfile::gaussian(1.0, 0, 1.0).unwrap()).unwrap();
    let mut g = c.benchmark_group("evolution");
    g.sample_size(10);
    for (name, par) in MODES {
        let settings = EvolutionSettings { par, ..Default::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| Evolution::new(black_box(&f), 2.0, &settings).unwrap())
        });
    }
    g.finish();
}

fn sobolev_sweep(c: &mut Criterion) {
    let tuples: Vec<(u32, u32)> = (2..=4).flat_map(|n| (0..=2).map(move |k| (n, k))).collect();
    let mut g = c.benchmark_group("sobolev_sweep");
    g.sample_size(10);
    for (name, par) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                parallel::map(&tuples, par, |&(n, k)| {
                    let f = SpectralFunction::single(n, k, RadialProfile::gaussian(1.0, 0, 1.0).unwrap()).unwrap();
                    sobolev_trace_ratio(&f, 1.5, SobolevVariant::L2Omega).unwrap().ratio
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, trace_quadrature, hankel, evolution, sobolev_sweep);
criterion_main!(benches);
