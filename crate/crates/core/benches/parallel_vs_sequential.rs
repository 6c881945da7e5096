use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use spectral_shape::constraints::Strategy;
use spectral_shape::eigen::{mu_k, EvalOptions};
use spectral_shape::families::{scan_family, Family, ScanOptions};
use spectral_shape::optimize::{solve_interior, OptimizeOptions};
use spectral_shape::par::{map_indexed, ExecMode};
use spectral_shape::support::SupportFunction;

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn spectra(c: &mut Criterion) {
    let eval = EvalOptions { h_factor: 30.0, ..Default::default() };
    let shapes: Vec<SupportFunction> =
        (0..8).map(|i| SupportFunction::rectangle(0.0, 0.0, 1.0, 0.5 + 0.1 * i as f64).unwrap()).collect();
    let mut g = c.benchmark_group("spectra");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(map_indexed(mode, shapes.len(), |i| mu_k(&shapes[i], 2, &eval).ok())))
        });
    }
    g.finish();
}

fn scan(c: &mut Criterion) {
    let grid: Vec<f64> = (0..6).map(|i| 0.1 + 0.1 * i as f64).collect();
    let mut g = c.benchmark_group("scan");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = ScanOptions { eval: EvalOptions { h_factor: 20.0, ..Default::default() }, exec, ..Default::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(scan_family(Family::DiskSquareIntersection, 3, &grid, &opts).unwrap().best_value))
        });
    }
    g.finish();
}

fn multistart(c: &mut Criterion) {
    let square = SupportFunction::rectangle(-1.0, -1.0, 1.0, 1.0).unwrap();
    let mut g = c.benchmark_group("optimize");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = OptimizeOptions {
            starts: 4,
            max_iter: 3,
            h_factor: 15.0,
            final_h_factor: 20.0,
            exec,
            ..Default::default()
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(solve_interior(&square, 2, Strategy::PiecewiseAffine { m: 16 }, &opts).unwrap().objective))
        });
    }
    g.finish();
}

criterion_group!(benches, spectra, scan, multistart);
criterion_main!(benches);
