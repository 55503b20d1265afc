use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use longevity_bench::{dominant_system, long_cashflows, sample_table};
use longevity_core::monte_carlo::simulate_deaths;
use longevity_core::pde::option::{price_american, GridSpec, OptionKind, OptionSpec};
use longevity_core::settlement::irr;
use longevity_core::RngStream;

fn tridiagonal(c: &mut Criterion) {
    let sys = dominant_system(1000);
    c.bench_function("thomas_1000", |b| {
        b.iter(|| black_box(&sys).solve().unwrap())
    });
    c.bench_function("pivoted_1000", |b| {
        b.iter(|| black_box(&sys).solve_pivoted().unwrap())
    });
}

fn american_put(c: &mut Criterion) {
    let spec = OptionSpec::new(OptionKind::Put, 100.0, 0.05, 0.2, 1.0);
    let grid = GridSpec {
        space: 400,
        time: 400,
    };
    let mut g = c.benchmark_group("pde");
    g.sample_size(10);
    g.bench_function("american_put_400x400", |b| {
        b.iter(|| price_american(black_box(&spec), grid).unwrap())
    });
    g.finish();
}

fn deaths(c: &mut Criterion) {
    let table = sample_table();
    c.bench_function("simulate_deaths_100k", |b| {
        b.iter(|| {
            let mut rng = RngStream::new(7, 0);
            simulate_deaths(&table, 70, 100_000, &mut rng).unwrap()
        })
    });
}

fn rate_of_return(c: &mut Criterion) {
    let cf = long_cashflows();
    c.bench_function("irr_9_flows", |b| b.iter(|| irr(black_box(&cf)).unwrap()));
}

criterion_group!(benches, tridiagonal, american_put, deaths, rate_of_return);
criterion_main!(benches);
