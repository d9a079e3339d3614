mod common;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{line_instance, plan_x, tight_instance, unit_bound_weights};
use vrpsd_core::cuts::{
    activation_wdl, activation_wof, aggregate_sri, partial_route_bundle, project_inequality, projected_aggregated_sri,
    set_cut_bundle, sri_violation, AffineForm, CutError, CutKind, LinearCut, Point, Projection,
};
use vrpsd_core::model::{edge_count, FirstStage, PartialRoute};
use vrpsd_core::oracles::all_plans;
use vrpsd_core::rational::{int, ratio, Rat};
use vrpsd_core::recourse::{scenario_optimal_recourse, RecourseWeights};
use vrpsd_core::verify::golden_instance;
use vrpsd_core::{Route, WeightScheme};

fn example_three() -> (vrpsd_core::Instance, RecourseWeights) {
    (line_instance(vec![vec![4, 4, 4, 8]], 10, vec![int(1)]), unit_bound_weights(&[2, 2, 6, 2]))
}

#[test]
fn sri_violation_on_the_fractional_policy() {
    let (inst, _) = example_three();
    let x = plan_x(4, &[&[1, 2, 3, 4]]);
    let y = vec![vec![0.0, 0.3, 0.3, 0.0, 0.3]];
    let v1 = sri_violation(&inst, &x, &y, &[1, 2, 3], 0).unwrap();
    let v2 = sri_violation(&inst, &x, &y, &[2, 3, 4], 0).unwrap();
    assert!((v1 - 0.4).abs() < 1e-12);
    assert!((v2 - 0.4).abs() < 1e-12);
    assert_eq!(sri_violation(&inst, &x, &y, &[], 0), Err(CutError::EmptySet));
}

#[test]
fn sri_violation_is_zero_for_the_whole_customer_set() {
    let (inst, _) = example_three();
    let x = plan_x(4, &[&[1, 2], &[3, 4]]);
    let y = vec![vec![0.0; 5]];
    assert!(sri_violation(&inst, &x, &y, &[1, 2, 3, 4], 0).unwrap().abs() < 1e-12);
}

#[test]
fn integer_policies_satisfy_every_sri() {
    let (inst, w) = example_three();
    let route = Route::new(vec![1, 2, 3, 4]).unwrap();
    let policy = scenario_optimal_recourse(&inst, &route, &w).unwrap().policy;
    let x = plan_x(4, &[&[1, 2, 3, 4]]);
    let y: Vec<Vec<f64>> = vec![std::iter::once(0.0).chain(policy.scenario(0).iter().map(|&v| v as f64)).collect()];
    for mask in 1u32..16 {
        let set: Vec<usize> = (1..=4).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        assert!(sri_violation(&inst, &x, &y, &set, 0).unwrap() <= 1e-12, "set {set:?}");
    }
}

#[test]
fn aggregation_sums_violated_scenarios() {
    let inst = line_instance(vec![vec![4, 4, 4, 8], vec![4, 4, 4, 8]], 10, vec![ratio(1, 2), ratio(1, 2)]);
    let x = plan_x(4, &[&[1, 2, 3, 4]]);
    let y = vec![vec![0.0, 0.3, 0.3, 0.0, 0.3], vec![0.0, 0.4, 0.4, 0.0, 0.4]];
    let cut = aggregate_sri(&inst, &x, &y, &[3, 1, 2], 1e-4).unwrap().unwrap();
    assert_eq!(cut.set, vec![1, 2, 3]);
    assert_eq!(cut.scenarios, vec![0, 1]);
    let row = cut.to_cut(&inst);
    assert_eq!(row.kind, CutKind::AggregatedSri);
    let theta = vec![0.0; 5];
    let viol = row.violation(Point { x: &x, theta: &theta, y: Some(&y) });
    assert!((viol - 0.6).abs() < 1e-12);

    let single = aggregate_sri(&inst, &x, &[y[0].clone(), vec![0.0, 1.0, 0.0, 0.0, 0.0]], &[1, 2, 3], 1e-4).unwrap();
    let single = single.unwrap();
    assert_eq!(single.scenarios, vec![0]);
    assert_eq!(single.to_cut(&inst).kind, CutKind::Sri);

    let covered = vec![vec![0.0, 0.0, 1.0, 0.0, 1.0]; 2];
    assert_eq!(aggregate_sri(&inst, &x, &covered, &[1, 2, 3], 1e-4).unwrap(), None);
}

#[test]
fn projection_of_the_worked_example() {
    let p = ratio(1, 2);
    let a: BTreeMap<(usize, usize), Rat> =
        [(1, 2), (2, 3), (3, 3)].into_iter().map(|(v, c)| ((0, v), &p * int(c))).collect();
    let weights = unit_bound_weights(&[2, 3, 4]);
    let mut h = AffineForm::constant(&p * int(5) + &p * int(3) * int(1 - 3));
    h.add_inner(&[1, 2, 3], &(&p * int(3)));
    let cut = project_inequality(&a, h.clone(), &weights, &[p.clone(), p.clone()]).unwrap().cut().unwrap();
    let phi: Vec<Rat> = cut.theta.values().cloned().collect();
    assert_eq!(phi, vec![int(1), int(1), ratio(3, 4)]);
    assert_eq!(cut.rhs, h);
}

#[test]
fn projection_edge_cases() {
    let weights = unit_bound_weights(&[2, 0]);
    let zero = project_inequality(&BTreeMap::new(), AffineForm::default(), &weights, &[int(1)]).unwrap();
    let zero = zero.cut().unwrap();
    assert!(zero.theta.is_empty());
    assert!(zero.to_cut(CutKind::ProjectedSri).is_vacuous());

    let a: BTreeMap<(usize, usize), Rat> = [((0, 2), int(1))].into_iter().collect();
    let trivial = project_inequality(&a, AffineForm::constant(int(1)), &weights, &[int(1)]).unwrap();
    assert_eq!(trivial, Projection::Trivial);

    let err = project_inequality(&a, AffineForm::default(), &weights, &[int(-1)]);
    assert_eq!(err, Err(CutError::NegativeProbability));
}

#[test]
fn golden_set_cut_bundle() {
    let (inst, w) = golden_instance();
    let bundle = set_cut_bundle(&inst, &[1, 2, 3], 1, &w).unwrap();
    assert_eq!(bundle.lower, int(5));
    assert_eq!(bundle.per_scenario[0].alpha, int(3));
    assert_eq!(bundle.per_scenario[0].beta, vec![(1, int(-1))]);
    let dom = bundle.dominating.unwrap();
    let phi: Vec<Rat> = dom.theta.values().cloned().collect();
    assert_eq!(phi, vec![int(1), int(1), ratio(3, 4)]);
    let mut rhs = AffineForm::constant(int(5 + 3 * (1 - 3)));
    rhs.add_inner(&[1, 2, 3], &int(3));
    assert_eq!(dom.rhs, rhs);

    let mut ils = LinearCut::theta_bound(CutKind::SetCut, &[1, 2, 3], &int(5), &activation_wdl(&[1, 2, 3], 1));
    ils.support = vec![1, 2, 3];
    assert_eq!(bundle.ils, ils);
}

#[test]
fn set_cut_is_vacuous_without_excess_vehicles() {
    let inst = line_instance(vec![vec![3, 3, 3]], 10, vec![int(1)]);
    let bundle = set_cut_bundle(&inst, &[1, 2, 3], 1, &unit_bound_weights(&[1, 1, 1])).unwrap();
    assert_eq!(bundle.lower, int(0));
    assert_eq!(bundle.per_scenario[0].alpha, int(0));
    assert!(bundle.per_scenario[0].beta.is_empty());
    assert!(bundle.certificate.alpha.is_empty());
}

#[test]
fn greedy_set_bound_with_double_unloads() {
    let inst = line_instance(vec![vec![10, 10, 10, 10]], 10, vec![int(1)]);
    let w = RecourseWeights::new(vec![int(0), int(1), int(5), int(9), int(20)], vec![0, 2, 1, 1, 1]).unwrap();
    let bundle = set_cut_bundle(&inst, &[1, 2, 3, 4], 1, &w).unwrap();
    assert_eq!(bundle.lower, int(2 + 5));
    let d = &bundle.per_scenario[0];
    assert_eq!(d.alpha, int(5));
    assert_eq!(d.beta, vec![(1, int(-4))]);
    assert_eq!(&d.alpha * int(3) + &d.beta[0].1 * int(2), d.lower);
}

#[test]
fn set_cut_rejects_infeasible_bounds() {
    let inst = line_instance(vec![vec![10, 10, 10]], 10, vec![int(1)]);
    let w = RecourseWeights::new(vec![int(0), int(1), int(1), int(1)], vec![0, 1, 0, 0]).unwrap();
    assert!(matches!(set_cut_bundle(&inst, &[1, 2, 3], 1, &w), Err(CutError::InfeasibleBound { .. })));
}

#[test]
fn set_duals_match_the_greedy_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..200 {
        let n = rng.gen_range(2..=6);
        let demands = vec![(0..n).map(|_| rng.gen_range(0..=10)).collect()];
        let inst = line_instance(demands, 10, vec![int(1)]);
        let w: Vec<Rat> = std::iter::once(int(0)).chain((0..n).map(|_| ratio(rng.gen_range(1..20), rng.gen_range(1..4)))).collect();
        let b: Vec<i64> = std::iter::once(0).chain((0..n).map(|_| rng.gen_range(1..=2))).collect();
        let w = RecourseWeights::new(w, b).unwrap();
        let set: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.7)).collect();
        if set.is_empty() {
            continue;
        }
        let k_prime = rng.gen_range(1..=2);
        let bundle = set_cut_bundle(&inst, &set, k_prime, &w).unwrap();
        let d = &bundle.per_scenario[0];
        let need = (inst.scenario_vehicles(0, &set) - k_prime).max(0);
        let dual: Rat = &d.alpha * int(need) + d.beta.iter().map(|(v, b)| b * int(w.b(*v))).sum::<Rat>();
        assert_eq!(dual, d.lower, "case {case}");
        assert!(d.alpha <= d.lower || need == 0, "case {case}");
        for &v in &set {
            let beta = d.beta.iter().find(|(u, _)| *u == v).map_or(int(0), |(_, b)| b.clone());
            assert!(&d.alpha + &beta <= *w.w(v), "case {case}: reduced cost of {v}");
        }
    }
}

#[test]
fn all_singleton_partial_route_recovers_the_route_recourse() {
    let (inst, w) = example_three();
    let route = Route::new(vec![1, 2, 3, 4]).unwrap();
    let bundle = partial_route_bundle(&inst, &PartialRoute::from_route(&route), &w).unwrap();
    assert_eq!(bundle.lower, int(4));
    let x = plan_x(4, &[&[1, 2, 3, 4]]);
    let theta = vec![0.0; 5];
    let needed = bundle.ils.violation(Point { x: &x, theta: &theta, y: None });
    assert!((needed - 4.0).abs() < 1e-9);
}

#[test]
fn light_partial_route_has_zero_bound() {
    let inst = line_instance(vec![vec![2, 2, 2, 2]], 10, vec![int(1)]);
    let h = PartialRoute::new(vec![vec![1], vec![2, 3], vec![4]]).unwrap();
    let bundle = partial_route_bundle(&inst, &h, &unit_bound_weights(&[1, 1, 1, 1])).unwrap();
    assert_eq!(bundle.lower, int(0));
    assert!(bundle.per_scenario[0].alpha.is_empty());
    assert!(bundle.certificate.alpha.is_empty());
}

#[test]
fn single_binding_constraint_picks_the_cheapest_customer() {
    let inst = line_instance(vec![vec![3, 3, 3, 3]], 10, vec![int(1)]);
    let h = PartialRoute::new(vec![vec![1], vec![2, 3], vec![4]]).unwrap();
    let bundle = partial_route_bundle(&inst, &h, &unit_bound_weights(&[5, 2, 7, 4])).unwrap();
    assert_eq!(bundle.lower, int(2));
}

#[test]
fn partial_route_duals_are_bounded_and_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for case in 0..60 {
        let inst = tight_instance(6, 3, 300 + case);
        let w = RecourseWeights::for_instance(&inst, WeightScheme::Classical, rng.gen_range(1..=2));
        let mut customers: Vec<usize> = (1..=6).collect();
        rand::seq::SliceRandom::shuffle(&mut customers[..], &mut rng);
        let len = rng.gen_range(2..=6);
        let mut sets = Vec::new();
        let mut i = 0;
        while i < len {
            let take = if sets.last().is_some_and(|s: &Vec<usize>| s.len() > 1) || i + 1 == len { 1 } else { rng.gen_range(1..=2) };
            sets.push(customers[i..i + take].to_vec());
            i += take;
        }
        let h = PartialRoute::new(sets).unwrap();
        let bundle = partial_route_bundle(&inst, &h, &w).unwrap();
        let mut total = int(0);
        for (s, d) in bundle.per_scenario.iter().enumerate() {
            assert_eq!(d.objective(&w), d.lower, "case {case} scenario {s}");
            assert!(d.alpha_total() <= d.lower, "case {case} scenario {s}");
            total += inst.probability(s) * &d.lower;
        }
        assert_eq!(total, bundle.lower);
    }
}

#[test]
fn wdl_activation_values() {
    let n = 4;
    let x = plan_x(n, &[&[1, 2, 3], &[4]]);
    assert_eq!(activation_wdl(&[1, 2, 3], 1).eval(&x), 1.0);
    assert_eq!(activation_wdl(&[1, 2, 4], 1).eval(&x), 0.0);
    let mut frac = vec![0.0; edge_count(n)];
    frac[vrpsd_core::model::edge_index(1, 2)] = 1.3;
    assert!((activation_wdl(&[1, 2], 1).eval(&frac) - 1.3).abs() < 1e-12);
}

#[test]
fn wof_is_one_on_adhering_plans_and_at_most_zero_elsewhere() {
    let n = 5;
    let inst = line_instance(vec![vec![1; n]], 10, vec![int(1)]);
    let h = PartialRoute::new(vec![vec![1], vec![2, 3], vec![4]]).unwrap();
    let form = activation_wof(&h);
    let mut active = 0;
    for plan in all_plans(&inst, FirstStage::Subtour).unwrap() {
        let adheres = plan.routes().iter().any(|r| contains_adhering_piece(r, &h));
        let value = form.eval_exact(plan.x());
        if adheres {
            assert_eq!(value, int(1), "{:?}", plan.routes());
            active += 1;
        } else {
            assert!(value <= int(0), "{:?}", plan.routes());
        }
    }
    assert!(active > 0);
}

fn contains_adhering_piece(route: &Route, h: &PartialRoute) -> bool {
    let len = h.customers().len();
    let c = route.customers();
    (0..c.len().saturating_sub(len - 1))
        .any(|i| vrpsd_core::model::adheres(&Route::new(c[i..i + len].to_vec()).unwrap(), h))
}

#[test]
fn projected_aggregated_sri_plug_in() {
    let scenarios = 4;
    let inst = line_instance(vec![vec![6, 6, 6, 1]; scenarios], 10, vec![ratio(1, 4); scenarios]);
    let w = unit_bound_weights(&[2, 2, 2, 2]);
    let cut = projected_aggregated_sri(&inst, &[1, 2, 3], &[0, 2], &w).unwrap();
    assert!(cut.theta.values().all(|c| *c == int(2)));
    let mut rhs = AffineForm::constant(int(2 * -3 + 4));
    rhs.add_inner(&[1, 2, 3], &int(2));
    assert_eq!(cut.rhs, rhs);
    assert_eq!(projected_aggregated_sri(&inst, &[1, 2], &[], &w), Err(CutError::EmptyScenarioSet));
    let zero = unit_bound_weights(&[2, 0, 2, 2]);
    assert_eq!(projected_aggregated_sri(&inst, &[1, 2], &[0], &zero), Err(CutError::ZeroWeight(2)));
}

#[test]
fn single_scenario_aggregate_matches_the_general_projection() {
    let inst = tight_instance(5, 3, 9);
    let w = RecourseWeights::classical(&inst);
    let set = [1, 3, 4];
    for s in 0..3 {
        let direct = projected_aggregated_sri(&inst, &set, &[s], &w).unwrap();
        let mut cert = vrpsd_core::cuts::DualCertificate::default();
        cert.add_alpha(s, &set, int(1));
        let general = cert.project(&inst, &w).unwrap().cut().unwrap();
        assert_eq!(direct, general);
    }
}

#[test]
fn cut_lines_round_trip() {
    let (inst, w) = golden_instance();
    let bundle = set_cut_bundle(&inst, &[1, 2, 3], 1, &w).unwrap();
    let mut cuts = vec![bundle.ils.clone(), bundle.dominating.unwrap().to_cut(CutKind::ProjectedSri)];
    cuts.push(vrpsd_core::cuts::AggregatedSriCut { set: vec![1, 2], scenarios: vec![0] }.to_cut(&inst));
    cuts.push(LinearCut::capacity(CutKind::Rci, &[2, 3], 2));
    for cut in cuts {
        let line = cut.to_string();
        let back: LinearCut = line.parse().unwrap();
        assert_eq!(back, cut, "{line}");
    }
    assert!("SET; 1; theta[1]=1".parse::<LinearCut>().is_err());
    assert!("NOPE; 1; ; 0".parse::<LinearCut>().is_err());
}
