use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use vrpsd_bench::route_cases;
use vrpsd_core::oracles::maxflow_membership;
use vrpsd_core::recourse::{classical_recourse, is_recourse_action, scenario_optimal_recourse, RecourseWeights};

fn recourse(c: &mut Criterion) {
    let cases = route_cases(64, 8, 4);
    let weights: Vec<RecourseWeights> = cases.iter().map(|(inst, _)| RecourseWeights::classical(inst)).collect();

    c.bench_function("classical recourse, 64 routes of 8", |b| {
        b.iter(|| {
            for (inst, route) in &cases {
                black_box(classical_recourse(inst, route).unwrap());
            }
        })
    });

    c.bench_function("scenario-optimal recourse, 64 routes of 8", |b| {
        b.iter(|| {
            for ((inst, route), w) in cases.iter().zip(&weights) {
                black_box(scenario_optimal_recourse(inst, route, w).unwrap());
            }
        })
    });

    let y = vec![0i64, 1, 0, 0, 1, 0, 0, 1];
    let mut group = c.benchmark_group("membership, 64 routes of 8");
    group.bench_function("subroute test", |b| {
        b.iter(|| {
            for (inst, route) in &cases {
                black_box(is_recourse_action(inst, route, 0, &y).unwrap());
            }
        })
    });
    group.bench_function("max-flow test", |b| {
        b.iter(|| {
            for (inst, route) in &cases {
                black_box(maxflow_membership(inst, route, 0, &y));
            }
        })
    });
    group.finish();
}

criterion_group!(benches, recourse);
criterion_main!(benches);
