use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use verlinde_bench::{engine, TASKS};
use verlinde_core::fixed_points::{enumerate_t0, standard_schedule};
use verlinde_core::lie::RootSystem;
use verlinde_core::limit::verify_vanishing_mechanism;

fn enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_t0");
    for (name, h) in [("A1", 10), ("A2", 4), ("B2", 4), ("G2", 5), ("A3", 3)] {
        let rs = RootSystem::from_name(name).unwrap();
        group.bench_with_input(BenchmarkId::new(name, h), &h, |b, &h| {
            b.iter(|| enumerate_t0(black_box(&rs), h).unwrap())
        });
    }
    group.finish();
}

fn track(c: &mut Criterion) {
    let mut group = c.benchmark_group("track_to_minus1");
    for (name, g, h) in TASKS {
        let e = engine(name, g, h);
        let schedule = standard_schedule(&e.options.track, None, &[]).unwrap();
        group.bench_function(format!("{name}/g{g}/h{h}"), |b| {
            b.iter(|| e.track(black_box(&schedule), e.scope()).unwrap())
        });
    }
    group.finish();
}

fn fit(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit");
    group.sample_size(20);
    for (name, g, h) in TASKS {
        let e = engine(name, g, h);
        group.bench_function(format!("{name}/g{g}/h{h}"), |b| b.iter(|| e.fit(None).unwrap()));
    }
    group.finish();
}

fn limit(c: &mut Criterion) {
    let mut group = c.benchmark_group("limit");
    group.sample_size(20);
    for (name, g, h) in TASKS {
        let e = engine(name, g, h);
        group.bench_function(format!("{name}/g{g}/h{h}"), |b| {
            b.iter(|| verify_vanishing_mechanism(&e).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, enumerate, track, fit, limit);
criterion_main!(benches);
