//! Sequential against parallel execution on the main sweeps.

use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use latkit::enumeration::{enumerate_pforest_frames, Search, Table1Row};
use latkit::frames::sweep::pq_sweep;
use latkit::si::si_census;
use latkit::Exec;

const MODES: [Exec; 2] = [Exec::Sequential, Exec::Parallel];

fn table_row(c: &mut Criterion) {
    let row = Table1Row::by_key("assoc-dlp").expect("row");
    let mut g = c.benchmark_group("assoc-dlp n=7");
    for exec in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| row.count(7, &Search::new(exec)).unwrap())
        });
    }
    g.finish();
}

fn si(c: &mut Criterion) {
    let mut g = c.benchmark_group("si_census 7");
    for exec in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| si_census(7, &Search::new(exec)).unwrap().count())
        });
    }
    g.finish();
}

fn frames(c: &mut Criterion) {
    let mut g = c.benchmark_group("pq_sweep 3");
    for exec in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| pq_sweep(3, exec).unwrap().disagreements())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("pforest frames n=4");
    for exec in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| enumerate_pforest_frames(4, exec).unwrap().count())
        });
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10).measurement_time(Duration::from_secs(3));
    targets = table_row, si, frames
}
criterion_main!(benches);
