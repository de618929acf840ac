//! Sequential baseline vs the rayon path for the three sweep shapes that
//! dominate wall time: seed surveys, shot-speed scans, and period grids.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use selfsim::homoclinic;
use selfsim::integrator::IntegratorConfig;
use selfsim::kernels::ProblemParams;
use selfsim::sweep;

fn bench_seed_survey(c: &mut Criterion) {
    let k = ProblemParams::new(0.5).unwrap();
    let seeds = homoclinic::sample_seeds(&k, 16, 42);
    let cfg = IntegratorConfig::default();

    let mut group = c.benchmark_group("seed_survey_16");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("sequential", seeds.len()), |b| {
        b.iter(|| {
            sweep::map_sequential(&seeds, |&s| sweep::survey_seed(&k, s, &cfg).unwrap())
        })
    });
    #[cfg(feature = "parallel")]
    group.bench_function(BenchmarkId::new("parallel", seeds.len()), |b| {
        b.iter(|| sweep::map_parallel(&seeds, |&s| sweep::survey_seed(&k, s, &cfg).unwrap()))
    });
    group.finish();
}

fn bench_shot_scan(c: &mut Criterion) {
    let k = ProblemParams::new(0.5).unwrap();
    let cfg = IntegratorConfig::default();
    let betas: Vec<f64> = (0..32).map(|i| 0.05 + 0.02 * i as f64).collect();

    let mut group = c.benchmark_group("shot_scan_32");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| {
            sweep::map_sequential(&betas, |&beta| {
                selfsim::heteroclinic::classify_shot(&k, beta, &cfg).unwrap().0
            })
        })
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| {
            sweep::map_parallel(&betas, |&beta| {
                selfsim::heteroclinic::classify_shot(&k, beta, &cfg).unwrap().0
            })
        })
    });
    group.finish();
}

fn bench_period_grid(c: &mut Criterion) {
    let ps: Vec<f64> = (1..=48).map(|i| i as f64 / 50.0).collect();

    let mut group = c.benchmark_group("period_grid_48");
    group.sample_size(20);
    group.bench_function("sequential", |b| {
        b.iter(|| sweep::map_sequential(&ps, |&p| selfsim::periodic::period_t(p).unwrap()))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| sweep::map_parallel(&ps, |&p| selfsim::periodic::period_t(p).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_seed_survey, bench_shot_scan, bench_period_grid);
criterion_main!(benches);
