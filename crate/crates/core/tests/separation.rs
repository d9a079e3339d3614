mod common;

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{line_instance, mixture, plan_theta, plan_x, tight_instance, unit_bound_weights};
use vrpsd_core::cuts::{sri_violation, CutKind, Point};
use vrpsd_core::model::{edge_count, edge_index, FirstStage, PartialRoute};
use vrpsd_core::oracles::all_plans;
use vrpsd_core::rational::{int, ratio};
use vrpsd_core::recourse::{scenario_optimal_recourse, RecourseKind, RecourseWeights};
use vrpsd_core::separation::{
    extract_partial_routes, separate_rci, separate_sri_heuristic, separate_sri_milp, separation_round, SeparationContext,
    MILP_THRESHOLD,
};
use vrpsd_core::{Instance, Route};

fn demand_row(inst: &Instance, s: usize) -> Vec<i64> {
    inst.scenario_demands(s).to_vec()
}

#[test]
fn rci_finds_an_overloaded_route() {
    let inst = line_instance(vec![vec![6, 6, 3]], 10, vec![int(1)]);
    let x = plan_x(3, &[&[1, 2], &[3]]);
    let sets = separate_rci(&x, &demand_row(&inst, 0), 10, 1e-4);
    assert!(sets.contains(&vec![1, 2]), "{sets:?}");
    let x_ok = plan_x(3, &[&[1], &[2, 3]]);
    assert!(separate_rci(&x_ok, &demand_row(&inst, 0), 10, 1e-4).is_empty());
}

#[test]
fn rci_finds_a_fractional_subtour() {
    let n = 5;
    let mut x = vec![0.0; edge_count(n)];
    for (u, v, val) in [(1, 2, 0.75), (2, 3, 0.75), (1, 3, 0.75), (0, 1, 0.5), (0, 2, 0.5), (0, 3, 0.5)] {
        x[edge_index(u, v)] = val;
    }
    for (u, v) in [(0, 4), (4, 5), (0, 5)] {
        x[edge_index(u, v)] = 1.0;
    }
    let sets = separate_rci(&x, &[0, 1, 1, 1, 1, 1], 10, 1e-4);
    assert!(sets.contains(&vec![1, 2, 3]), "{sets:?}");
    assert!(sets.len() <= 10);
}

#[test]
fn sri_heuristic_on_the_fractional_policy() {
    let inst = line_instance(vec![vec![4, 4, 4, 8]], 10, vec![int(1)]);
    let x = plan_x(4, &[&[1, 2, 3, 4]]);
    let y = vec![vec![0.0, 0.3, 0.3, 0.0, 0.3]];
    let found = separate_sri_heuristic(&inst, &x, &y, &[0], 1e-4);
    assert!(!found.is_empty());
    for cut in &found {
        assert!(sri_violation(&inst, &x, &y, &cut.set, 0).unwrap() > 1e-4, "{cut:?}");
    }
    let y_ok = vec![vec![0.0, 0.0, 1.0, 0.0, 1.0]];
    assert!(separate_sri_heuristic(&inst, &x, &y_ok, &[0], 1e-4).is_empty());
}

#[test]
fn sri_heuristic_aggregates_scenarios_on_a_shared_set() {
    let inst = line_instance(vec![vec![6, 6, 1], vec![7, 5, 1]], 10, vec![ratio(1, 2), ratio(1, 2)]);
    let x = plan_x(3, &[&[1, 2], &[3]]);
    let y = vec![vec![0.0, 0.5, 0.0, 0.0], vec![0.0, 0.0, 0.5, 0.0]];
    let found = separate_sri_heuristic(&inst, &x, &y, &inst.scenarios_by_total_demand(), 1e-4);
    let on_pair: Vec<_> = found.iter().filter(|c| c.set == vec![1, 2]).collect();
    assert_eq!(on_pair.len(), 1);
    assert_eq!(on_pair[0].scenarios, vec![0, 1]);
}

#[test]
fn sri_heuristic_stops_after_the_first_productive_scenario() {
    let inst = line_instance(vec![vec![6, 6, 2, 2], vec![1, 1, 6, 6]], 10, vec![ratio(1, 2), ratio(1, 2)]);
    let order = inst.scenarios_by_total_demand();
    assert_eq!(order, vec![0, 1]);
    let x = plan_x(4, &[&[1, 2], &[3, 4]]);
    let y = vec![vec![0.0; 5]; 2];
    let found = separate_sri_heuristic(&inst, &x, &y, &order, 1e-4);
    assert!(!found.is_empty());
    assert!(found.iter().all(|c| c.set == vec![1, 2] && c.scenarios == vec![0]), "{found:?}");
    let reversed = separate_sri_heuristic(&inst, &x, &y, &[1, 0], 1e-4);
    assert!(reversed.iter().all(|c| c.set == vec![3, 4]), "{reversed:?}");
}

fn exhaustive_best(inst: &Instance, x: &[f64], y: &[Vec<f64>], s: usize) -> (f64, Vec<usize>) {
    let n = inst.n_customers();
    let mut best = (f64::NEG_INFINITY, vec![]);
    for mask in 1u32..(1 << n) {
        let set: Vec<usize> = (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        let v = sri_violation(inst, x, y, &set, s).unwrap();
        if v > best.0 {
            best = (v, set);
        }
    }
    best
}

#[test]
fn milp_separation_on_the_fractional_policy() {
    let inst = line_instance(vec![vec![4, 4, 4, 8]], 10, vec![int(1)]);
    let x = plan_x(4, &[&[1, 2, 3, 4]]);
    let y = vec![vec![0.0, 0.3, 0.0, 0.3, 0.3]];
    let set = separate_sri_milp(&inst, &x, &y, 0, Some(Duration::from_secs(10))).unwrap().unwrap();
    assert!(sri_violation(&inst, &x, &y, &set, 0).unwrap() >= MILP_THRESHOLD - 1e-9);
    let (best, _) = exhaustive_best(&inst, &x, &y, 0);
    assert!((best - 0.4).abs() < 1e-9);

    let y_ok = vec![vec![0.0, 0.0, 1.0, 0.0, 1.0]];
    assert_eq!(separate_sri_milp(&inst, &x, &y_ok, 0, Some(Duration::from_secs(10))).unwrap(), None);
}

#[test]
fn milp_separation_agrees_with_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut hits = 0;
    for case in 0..40u64 {
        let n = rng.gen_range(4..=7);
        let inst = tight_instance(n, 2, 900 + case);
        let plans = all_plans(&inst, FirstStage::Subtour).unwrap();
        let x = mixture(&mut rng, &plans, 3, n);
        let y: Vec<Vec<f64>> = (0..2)
            .map(|_| std::iter::once(0.0).chain((0..n).map(|_| if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..1.0) })).collect())
            .collect();
        for s in 0..2 {
            let (best, _) = exhaustive_best(&inst, &x, &y, s);
            let found = separate_sri_milp(&inst, &x, &y, s, Some(Duration::from_secs(30))).unwrap();
            match found {
                Some(set) => {
                    let v = sri_violation(&inst, &x, &y, &set, s).unwrap();
                    assert!(v >= MILP_THRESHOLD - 1e-9, "case {case}: returned violation {v}");
                    hits += 1;
                }
                None => assert!(best < 0.02, "case {case}: exhaustive violation {best} missed"),
            }
        }
    }
    assert!(hits > 0);
}

#[test]
fn integer_routes_become_singleton_partial_routes() {
    let x = plan_x(3, &[&[1, 2], &[3]]);
    let mut found = extract_partial_routes(&x, 3);
    found.sort_by_key(|h| h.customers().len());
    let want = vec![PartialRoute::new(vec![vec![3]]).unwrap(), PartialRoute::new(vec![vec![1], vec![2]]).unwrap()];
    let canon = |hs: &[PartialRoute]| hs.iter().map(|h| h.canonical()).collect::<Vec<_>>();
    assert_eq!(canon(&found), canon(&want));
}

#[test]
fn overlapping_triangles_give_a_clustered_partial_route() {
    let n = 3;
    let a = plan_x(n, &[&[1, 2, 3]]);
    let b = plan_x(n, &[&[1, 3, 2]]);
    let x: Vec<f64> = a.iter().zip(&b).map(|(p, q)| 0.5 * (p + q)).collect();
    let found = extract_partial_routes(&x, n);
    assert!(found.iter().any(|h| h.sets().iter().any(|s| s.len() == 2)), "{found:?}");
}

#[test]
fn fractional_star_yields_nothing() {
    let n = 4;
    let mut x = vec![0.0; edge_count(n)];
    for v in 1..=n {
        x[edge_index(0, v)] = 0.5;
    }
    assert!(extract_partial_routes(&x, n).is_empty());
}

struct Case {
    inst: Instance,
    weights: RecourseWeights,
    classical: RecourseWeights,
}

impl Case {
    fn new(inst: Instance) -> Self {
        let weights = RecourseWeights::classical(&inst);
        Case { inst, classical: weights.clone(), weights }
    }

    fn ctx<'a>(&'a self, x: &'a [f64], theta: &'a [f64], use_sri: bool) -> SeparationContext<'a> {
        SeparationContext {
            inst: &self.inst,
            x,
            theta,
            y: None,
            use_sri,
            recourse: RecourseKind::ScenarioOptimal,
            first_stage: FirstStage::Subtour,
            weights: &self.weights,
            classical_weights: &self.classical,
            scenario_order: self.inst.scenarios_by_total_demand(),
        }
    }
}

#[test]
fn round_is_silent_on_a_feasible_plan() {
    let case = Case::new(line_instance(vec![vec![4, 4, 4, 8]], 10, vec![int(1)]));
    let routes = [Route::new(vec![1, 2, 3, 4]).unwrap()];
    let plan = vrpsd_core::RoutingPlan::from_routes(4, routes.to_vec()).unwrap();
    let x = plan.x_f64();
    let theta = plan_theta(&case.inst, &plan, RecourseKind::ScenarioOptimal, &case.weights);
    for use_sri in [false, true] {
        assert!(separation_round(&case.ctx(&x, &theta, use_sri)).unwrap().is_empty());
    }
}

#[test]
fn round_cuts_off_missing_recourse() {
    let case = Case::new(line_instance(vec![vec![4, 4, 4, 8]], 10, vec![int(1)]));
    let x = plan_x(4, &[&[1, 2, 3, 4]]);
    let route = Route::new(vec![1, 2, 3, 4]).unwrap();
    assert!(scenario_optimal_recourse(&case.inst, &route, &case.weights).unwrap().value > int(0));
    let theta = vec![0.0; 5];
    for use_sri in [false, true] {
        let cuts = separation_round(&case.ctx(&x, &theta, use_sri)).unwrap();
        assert!(!cuts.is_empty());
        for cut in &cuts {
            assert!(cut.involves_recourse());
            assert!(cut.violation(Point { x: &x, theta: &theta, y: None }) >= 1e-4);
        }
    }
}

#[test]
fn round_separates_subtours_before_recourse() {
    let case = Case::new(line_instance(vec![vec![9, 9, 9, 9, 9]], 10, vec![int(1)]));
    let n = 5;
    let mut x = vec![0.0; edge_count(n)];
    for (u, v) in [(1, 2), (2, 3), (1, 3), (0, 4), (4, 5), (0, 5)] {
        x[edge_index(u, v)] = 1.0;
    }
    let theta = vec![0.0; n + 1];
    let cuts = separation_round(&case.ctx(&x, &theta, true)).unwrap();
    assert!(!cuts.is_empty());
    assert!(cuts.iter().any(|c| c.kind == CutKind::Sec && c.support == vec![1, 2, 3]), "{cuts:?}");
    assert!(cuts.iter().all(|c| matches!(c.kind, CutKind::Sec | CutKind::SetCut | CutKind::ProjectedAggregatedSri)));
}

#[test]
fn zero_weight_customers_are_skipped_by_projected_sris() {
    let inst = line_instance(vec![vec![6, 6]], 10, vec![int(1)]);
    let mut case = Case::new(inst);
    case.weights = unit_bound_weights(&[0, 3]);
    let x = plan_x(2, &[&[1, 2]]);
    let theta = vec![0.0; 3];
    let cuts = separation_round(&case.ctx(&x, &theta, true)).unwrap();
    for cut in &cuts {
        assert!(cut.kind != CutKind::ProjectedAggregatedSri || !cut.theta.contains_key(&1), "{cut}");
    }
}
