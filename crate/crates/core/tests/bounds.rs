mod common;

use std::collections::BTreeMap;
use std::time::Duration;

use common::{line_instance, tight_instance};
use vrpsd_core::cuts::AggregatedSriCut;
use vrpsd_core::model::FirstStage;
use vrpsd_core::rational::{int, to_f64};
use vrpsd_core::recourse::RecourseKind;
use vrpsd_core::solver::{
    build_root_relaxation, lagrangian_bound, solve, solve_root_phase1, Mode, Prepared, SolverConfig, SolverError, Status,
};
use vrpsd_core::Instance;

fn config(first_stage: FirstStage, mode: Mode) -> SolverConfig {
    SolverConfig { first_stage, mode, time_limit: Duration::from_secs(120), ..SolverConfig::default() }
}

#[test]
fn light_instance_needs_no_recourse_duals() {
    let inst = line_instance(vec![vec![1, 2, 1, 2], vec![2, 1, 2, 1]], 20, vec![int(1) / int(2), int(1) / int(2)]);
    let cfg = config(FirstStage::Subtour, Mode::Sri);
    let prep = Prepared::new(&inst, &cfg).unwrap();
    let p1 = solve_root_phase1(&prep, &cfg, cfg.phase1_limit).unwrap();
    assert!(p1.converged);
    assert!(p1.duals.iota.is_empty());
    let root = build_root_relaxation(&prep, &cfg, Some(&p1)).unwrap();
    assert!(!root.single_cut_added);
    assert!((p1.value - root.value).abs() < 1e-6, "{} vs {}", p1.value, root.value);
    let plain = build_root_relaxation(&prep, &cfg, None).unwrap();
    assert!(plain.value <= root.value + 1e-6);
}

#[test]
fn zero_budget_stops_after_the_first_lp() {
    let inst = tight_instance(6, 3, 4);
    let cfg = config(FirstStage::Cvrp, Mode::Sri);
    let prep = Prepared::new(&inst, &cfg).unwrap();
    let p1 = solve_root_phase1(&prep, &cfg, Duration::ZERO).unwrap();
    assert_eq!(p1.rounds, 1);
    let root = build_root_relaxation(&prep, &cfg, Some(&p1)).unwrap();
    assert!(root.value >= p1.value - 1e-6);
}

#[test]
fn root_relaxation_recovers_the_phase1_value() {
    for seed in 0..8 {
        let inst = tight_instance(7, 3, 40 + seed);
        for first_stage in [FirstStage::Cvrp, FirstStage::Subtour] {
            let cfg = config(first_stage, Mode::Sri);
            let prep = Prepared::new(&inst, &cfg).unwrap();
            let p1 = solve_root_phase1(&prep, &cfg, cfg.phase1_limit).unwrap();
            assert!(p1.converged, "seed {seed}");
            let root = build_root_relaxation(&prep, &cfg, Some(&p1)).unwrap();
            assert!(root.value >= p1.value - 1e-6, "seed {seed}: {} < {}", root.value, p1.value);
            assert!(root.value <= p1.value + 1e-6, "seed {seed}: {} > {}", root.value, p1.value);
        }
    }
}

#[test]
fn lagrangian_bound_matches_phase1_at_optimal_duals() {
    for seed in 0..6 {
        let inst = tight_instance(6, 3, 70 + seed);
        let cfg = config(FirstStage::Cvrp, Mode::Sri);
        let prep = Prepared::new(&inst, &cfg).unwrap();
        let p1 = solve_root_phase1(&prep, &cfg, cfg.phase1_limit).unwrap();
        let bound = lagrangian_bound(&prep, &p1.pool, &p1.duals.iota, &p1.duals.beta).unwrap();
        assert!((bound - p1.value).abs() < 1e-6, "seed {seed}: {bound} vs {}", p1.value);
    }
}

#[test]
fn lagrangian_bound_without_multipliers_is_the_routing_relaxation() {
    let inst = tight_instance(6, 2, 3);
    let cfg = config(FirstStage::Cvrp, Mode::Sri);
    let prep = Prepared::new(&inst, &cfg).unwrap();
    let p1 = solve_root_phase1(&prep, &cfg, cfg.phase1_limit).unwrap();
    let bound = lagrangian_bound(&prep, &p1.pool, &BTreeMap::new(), &BTreeMap::new()).unwrap();
    let mut only_pool = p1.clone();
    only_pool.duals = Default::default();
    only_pool.value = f64::NEG_INFINITY;
    let root = build_root_relaxation(&prep, &cfg, Some(&only_pool)).unwrap();
    assert!((bound - root.value).abs() < 1e-6, "{bound} vs {}", root.value);
}

#[test]
fn lagrangian_bound_detects_unbounded_recourse_and_bad_signs() {
    let inst = tight_instance(5, 2, 8);
    let cfg = config(FirstStage::Subtour, Mode::Sri);
    let prep = Prepared::new(&inst, &cfg).unwrap();
    let v = 1;
    let beyond = inst.probability(0) * prep.weights.w(v) + int(1);
    let iota = [(AggregatedSriCut { set: vec![v], scenarios: vec![0] }, beyond)].into_iter().collect();
    assert_eq!(lagrangian_bound(&prep, &[], &iota, &BTreeMap::new()).unwrap(), f64::NEG_INFINITY);

    let positive: BTreeMap<(usize, usize), _> = [((0, v), int(1))].into_iter().collect();
    assert!(matches!(lagrangian_bound(&prep, &[], &BTreeMap::new(), &positive), Err(SolverError::Cut(_))));
}

#[test]
fn three_customer_instance_needs_few_outer_iterations() {
    let cost = vec![vec![0, 4, 4, 4], vec![4, 0, 3, 5], vec![4, 3, 0, 3], vec![4, 5, 3, 0]];
    let inst =
        Instance::new("three", cost, 10, Some(2), vec![vec![6, 6, 6], vec![3, 3, 3]], vec![int(1) / int(2), int(1) / int(2)])
            .unwrap();
    let cfg = config(FirstStage::Subtour, Mode::Ils);
    let report = solve(&inst, &cfg).unwrap();
    assert_eq!(report.status, Status::Optimal);
    assert!(report.outer_iterations <= 3, "{} iterations", report.outer_iterations);
}

#[test]
fn report_bounds_are_consistent() {
    let inst = tight_instance(6, 3, 21);
    for (recourse, mode) in [(RecourseKind::ScenarioOptimal, Mode::Sri), (RecourseKind::Classical, Mode::IlsPlusSri)] {
        let cfg = SolverConfig { recourse, ..config(FirstStage::Cvrp, mode) };
        let report = solve(&inst, &cfg).unwrap();
        let value = report.value_f64().unwrap();
        assert!(value >= report.bound - 1e-6);
        assert!(report.root_bound <= value + 1e-6);
        if let Some(p1) = report.phase1_value {
            assert!(report.root_bound >= p1 - 1e-6);
        }
        let recourse_total: f64 = report.routes.iter().map(|r| to_f64(&r.recourse.total)).sum();
        let cost_total: i64 = report.routes.iter().map(|r| r.cost).sum();
        assert!((cost_total as f64 + recourse_total + to_f64(&report.base_cost) - value).abs() < 1e-6);
        assert!(report.gap_pct().unwrap() <= 1e-4);
    }
}
