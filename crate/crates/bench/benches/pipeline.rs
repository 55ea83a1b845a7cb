//! Benchmarks for each stage of the travelling-wave pipeline: closure
//! evaluation, chord analysis, profile integration, field evolution, value
//! reconstruction, and Monte Carlo policy scoring.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use std::hint::black_box;

use hjbwave_bench::{general_wave, simple_wave};
use hjbwave_core::{
    evolve, find_phi_roots, integrate_profile, marginal_from_phi, policy_from_wave,
    reconstruct_phi, simulate, ClosureBranch, EvolveOptions, ModelParams, PolicyField, SdeConfig,
    SpatialGrid, Utility,
};

/// Pointwise closure evaluation on both branches.
fn bench_closures(c: &mut Criterion) {
    let simple = ModelParams::simple(1.0).unwrap();
    let general = ModelParams::general(1.2, 0.4, -0.1, 1.5).unwrap();
    let phis: Vec<f64> = (0..1024).map(|i| 0.05 + 0.005 * i as f64).collect();

    let mut group = c.benchmark_group("closures");
    group.throughput(Throughput::Elements(phis.len() as u64));
    for (name, params) in [("simple", &simple), ("general", &general)] {
        group.bench_function(format!("a_b_theta/{name}"), |b| {
            b.iter(|| {
                let mut acc = 0.0;
                for &phi in &phis {
                    let branch = if phi <= 1.0 {
                        ClosureBranch::AtOrBelowOne
                    } else {
                        ClosureBranch::AboveOne
                    };
                    acc += params.a_on(branch, phi)
                        + params.b_on(branch, phi)
                        + params.theta_star(phi).unwrap();
                }
                black_box(acc)
            })
        });
        group.bench_function(format!("invert_a/{name}"), |b| {
            let zs: Vec<f64> = phis
                .iter()
                .map(|&phi| {
                    let branch = if phi <= 1.0 {
                        ClosureBranch::AtOrBelowOne
                    } else {
                        ClosureBranch::AboveOne
                    };
                    params.a_on(branch, phi)
                })
                .collect();
            b.iter(|| {
                let mut acc = 0.0;
                for &z in &zs {
                    acc += params.invert_a(z).unwrap();
                }
                black_box(acc)
            })
        });
    }
    group.finish();
}

/// Chord construction and the root scan of the chord residual.
fn bench_chord(c: &mut Criterion) {
    let params = ModelParams::general(1.0, 0.0, 0.0, 1.5).unwrap();
    let mut group = c.benchmark_group("chord");
    group.bench_function("root_scan/general", |b| {
        b.iter(|| find_phi_roots(&params, black_box(-0.1), black_box(0.1), (0.02, 20.0)).unwrap())
    });
    group.finish();
}

/// Adaptive integration of the full wave profile.
fn bench_profile(c: &mut Criterion) {
    let (simple_spec, _) = simple_wave();
    let (general_spec, _) = general_wave();
    let mut group = c.benchmark_group("profile");
    group.bench_function("integrate/simple", |b| {
        b.iter(|| integrate_profile(black_box(&simple_spec), None).unwrap())
    });
    group.bench_function("integrate/general", |b| {
        b.iter(|| integrate_profile(black_box(&general_spec), None).unwrap())
    });
    group.finish();
}

/// A short finite-volume evolution of the field equation.
fn bench_evolve(c: &mut Criterion) {
    let (spec, profile) = simple_wave();
    let grid = SpatialGrid::new(-8.0, 8.0, 256).unwrap();
    let phi0: Vec<f64> = grid.centers().iter().map(|&x| profile.v_at(x)).collect();
    let opts = EvolveOptions::new(vec![0.5]);

    let mut group = c.benchmark_group("pde");
    group.sample_size(20);
    group.bench_function("evolve/256x0.5", |b| {
        b.iter_batched(
            || phi0.clone(),
            |field| evolve(&spec.params, &grid, &field, &opts).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

/// Value reconstruction and the inverse transformation, round trip.
fn bench_value(c: &mut Criterion) {
    let params = ModelParams::simple(1.0).unwrap();
    let (_, profile) = simple_wave();
    let n = 2001;
    let x: Vec<f64> = (0..n)
        .map(|i| -5.0 + 10.0 * i as f64 / (n - 1) as f64)
        .collect();
    let phi: Vec<f64> = x.iter().map(|&xi| profile.v_at(xi)).collect();

    let mut group = c.benchmark_group("value");
    group.throughput(Throughput::Elements(n as u64));
    group.bench_function("round_trip/2001", |b| {
        b.iter(|| {
            let curve = marginal_from_phi(&params, &x, &phi, 0.0).unwrap();
            black_box(reconstruct_phi(&params, &curve).unwrap())
        })
    });
    group.finish();
}

/// Monte Carlo scoring of a constant policy and the wave policy.
fn bench_mc(c: &mut Criterion) {
    let (spec, profile) = simple_wave();
    let config = SdeConfig {
        x0: 0.0,
        t0: 0.0,
        t_end: 1.0,
        n_steps: 100,
        n_paths: 2000,
        seed: 42,
    };
    let utility = Utility::Cara { lambda: 1.0 };
    let constant = PolicyField::Constant { theta: 0.5 };
    let wave = policy_from_wave(&spec, &profile, config.t_end);

    let mut group = c.benchmark_group("mc");
    group.sample_size(20);
    group.throughput(Throughput::Elements(
        (config.n_paths * config.n_steps) as u64,
    ));
    group.bench_function("simulate/constant", |b| {
        b.iter(|| simulate(&spec.params, &config, &constant, &utility).unwrap())
    });
    group.bench_function("simulate/wave", |b| {
        b.iter(|| simulate(&spec.params, &config, &wave, &utility).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_closures,
    bench_chord,
    bench_profile,
    bench_evolve,
    bench_value,
    bench_mc
);
criterion_main!(benches);
