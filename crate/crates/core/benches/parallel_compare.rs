//! Parallel vs sequential timing for the two data-parallel hot spots: the
//! segmented sieve build and the alpha-grid M profile. Run with and without
//! the `parallel` feature to compare; the `_seq` variants give the
//! single-thread baseline inside a parallel-enabled build.

use criterion::{criterion_group, criterion_main, Criterion};
use powergap_core::explicit_formula::{m_grid_profile, m_grid_profile_seq, GoldstonParams};
use powergap_core::numerics::{ExtReal, RoundingDir};
use powergap_core::oracle::SieveTable;

fn bench_sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve_build_1e7");
    g.sample_size(10);
    g.bench_function("default", |b| {
        b.iter(|| SieveTable::build(10_000_000).unwrap())
    });
    g.bench_function("sequential", |b| {
        b.iter(|| SieveTable::build_sequential(10_000_000).unwrap())
    });
    g.finish();
}

fn bench_alpha_grid(c: &mut Criterion) {
    let params = GoldstonParams::default();
    let log_xk = ExtReal::parse_decimal("1e3", 128, RoundingDir::Nearest).unwrap();
    let mut g = c.benchmark_group("alpha_grid_200");
    g.sample_size(10);
    g.bench_function("default", |b| {
        b.iter(|| m_grid_profile(&log_xk, &params, 200).unwrap())
    });
    g.bench_function("sequential", |b| {
        b.iter(|| m_grid_profile_seq(&log_xk, &params, 200).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_sieve, bench_alpha_grid);
criterion_main!(benches);
