#![allow(dead_code)]

use rand::Rng;

use vrpsd_core::generate::{generate, GeneratorConfig};
use vrpsd_core::model::{edge_count, rounded_euclidean, RoutingPlan};
use vrpsd_core::rational::{int, to_f64};
use vrpsd_core::recourse::{classical_recourse, scenario_optimal_recourse, RecourseKind, RecourseWeights};
use vrpsd_core::{Instance, Rat, Route};

/// Generated instance with enough demand variance that routes fail.
pub fn tight_instance(n: usize, scenarios: usize, seed: u64) -> Instance {
    let cfg = GeneratorConfig { spread: Some(5), ..GeneratorConfig::new(n, scenarios, 15, seed) };
    generate(&cfg).unwrap()
}

/// Per-customer recourse of every route of `plan`, vertex-indexed.
pub fn plan_theta(inst: &Instance, plan: &RoutingPlan, kind: RecourseKind, weights: &RecourseWeights) -> Vec<f64> {
    let mut theta = vec![0.0; inst.n_customers() + 1];
    for r in plan.routes() {
        let b = match kind {
            RecourseKind::Classical => classical_recourse(inst, r).unwrap(),
            RecourseKind::ScenarioOptimal => scenario_optimal_recourse(inst, r, weights).unwrap().breakdown,
        };
        for (&v, q) in &b.per_customer {
            theta[v] = to_f64(q);
        }
    }
    theta
}

/// Random convex combination of up to `k` plans.
pub fn mixture<R: Rng>(rng: &mut R, plans: &[RoutingPlan], k: usize, n: usize) -> Vec<f64> {
    let picks = rng.gen_range(1..=k);
    let mut weights: Vec<f64> = (0..picks).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let mut x = vec![0.0; edge_count(n)];
    for w in weights {
        let plan = &plans[rng.gen_range(0..plans.len())];
        for (xe, &pe) in x.iter_mut().zip(plan.x()) {
            *xe += w * pe as f64;
        }
    }
    x
}

/// Customers on a line at `(3v, 4)`; depot at the origin.
pub fn line_instance(demands: Vec<Vec<i64>>, capacity: i64, probabilities: Vec<Rat>) -> Instance {
    let n = demands[0].len();
    let coords: Vec<[i64; 2]> = std::iter::once([0, 0]).chain((1..=n as i64).map(|v| [3 * v, 4])).collect();
    let cost = rounded_euclidean(&coords);
    Instance::new("line", cost, capacity, None, demands, probabilities).unwrap()
}

/// Edge vector of the given routes.
pub fn plan_x(n: usize, routes: &[&[usize]]) -> Vec<f64> {
    let routes = routes.iter().map(|r| Route::new(r.to_vec()).unwrap()).collect();
    RoutingPlan::from_routes(n, routes).unwrap().x_f64()
}

/// Vertex-indexed weights `w` with bound 1.
pub fn unit_bound_weights(w: &[i64]) -> RecourseWeights {
    let w: Vec<Rat> = std::iter::once(0).chain(w.iter().copied()).map(int).collect();
    let b = std::iter::once(0).chain(std::iter::repeat(1)).take(w.len()).collect();
    RecourseWeights::new(w, b).unwrap()
}
