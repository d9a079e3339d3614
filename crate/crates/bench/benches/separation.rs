use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use std::time::Duration;

use vrpsd_bench::instance;
use vrpsd_core::model::edge_count;
use vrpsd_core::oracles::all_plans;
use vrpsd_core::recourse::RecourseWeights;
use vrpsd_core::separation::{extract_partial_routes, separate_rci, separate_sri_milp, separation_round, SeparationContext};
use vrpsd_core::{FirstStage, RecourseKind};

fn separation(c: &mut Criterion) {
    let inst = instance(7, 3);
    let n = inst.n_customers();
    let plans = all_plans(&inst, FirstStage::Subtour).unwrap();
    let picks = [0, plans.len() / 3, plans.len() / 2, plans.len() - 1];
    let mut x = vec![0.0; edge_count(n)];
    for &i in &picks {
        for (xe, &pe) in x.iter_mut().zip(plans[i].x()) {
            *xe += pe as f64 / picks.len() as f64;
        }
    }
    let theta = vec![0.0; n + 1];
    let y = vec![vec![0.0; n + 1]; inst.n_scenarios()];
    let weights = RecourseWeights::classical(&inst);

    c.bench_function("capacity heuristic, 7 customers", |b| {
        b.iter(|| black_box(separate_rci(&x, inst.scenario_demands(0), inst.capacity(), 1e-4)))
    });
    c.bench_function("partial-route extraction, 7 customers", |b| b.iter(|| black_box(extract_partial_routes(&x, n))));
    c.bench_function("SRI MIP separation, 7 customers", |b| {
        b.iter(|| black_box(separate_sri_milp(&inst, &x, &y, 0, Some(Duration::from_secs(30))).unwrap()))
    });
    for use_sri in [false, true] {
        let name = if use_sri { "separation round with SRIs" } else { "separation round with ILS cuts" };
        c.bench_function(name, |b| {
            b.iter(|| {
                let ctx = SeparationContext {
                    inst: &inst,
                    x: &x,
                    theta: &theta,
                    y: None,
                    use_sri,
                    recourse: RecourseKind::ScenarioOptimal,
                    first_stage: FirstStage::Subtour,
                    weights: &weights,
                    classical_weights: &weights,
                    scenario_order: inst.scenarios_by_total_demand(),
                };
                black_box(separation_round(&ctx).unwrap())
            })
        });
    }
}

criterion_group!(benches, separation);
criterion_main!(benches);
