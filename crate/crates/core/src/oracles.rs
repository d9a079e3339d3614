//! Brute-force ground truth used by tests and the verification battery.

use std::collections::{HashMap, VecDeque};

use num::Zero;
use rand::Rng;
use thiserror::Error;

use crate::lp::{solve_lp, LinearModel, LinearRow, Sense, SolveStatus, INTEGRALITY_TOL};
use crate::model::{preprocess_large_demands, Direction, FirstStage, Instance, ModelError, Route, RoutingPlan};
use crate::recourse::{RecourseKind, RecourseWeights};
use crate::rational::{int, ratio, Rat};

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("instance too large for enumeration ({0} customers)")]
    TooLarge(usize),
    #[error("no recourse action within the bounds")]
    Infeasible,
    #[error("no feasible routing plan")]
    NoPlan,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Max-flow check of the unloading network: source arcs `d(v_i)` into each
/// customer, route arcs `v_i → v_{i+1}` (last one into the depot) and return
/// arcs `v_i → depot` of capacity `C`, `C·y_i`. Feasible iff all demand flows.
pub fn maxflow_membership(inst: &Instance, route: &Route, scenario: usize, y: &[i64]) -> bool {
    let seq = route.customers();
    let l = seq.len();
    let (source, sink) = (l, l + 1);
    let mut cap = vec![vec![0i64; l + 2]; l + 2];
    let c = inst.capacity();
    let mut total = 0;
    for (i, &v) in seq.iter().enumerate() {
        let d = inst.demand(scenario, v);
        total += d;
        cap[source][i] += d;
        let next = if i + 1 < l { i + 1 } else { sink };
        cap[i][next] += c;
        cap[i][sink] += c * y[i];
    }
    max_flow(&mut cap, source, sink) == total
}

fn max_flow(cap: &mut [Vec<i64>], s: usize, t: usize) -> i64 {
    let n = cap.len();
    let mut flow = 0;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if parent[v] == usize::MAX && cap[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t] == usize::MAX {
            return flow;
        }
        let mut push = i64::MAX;
        let mut v = t;
        while v != s {
            push = push.min(cap[parent[v]][v]);
            v = parent[v];
        }
        let mut v = t;
        while v != s {
            cap[parent[v]][v] -= push;
            cap[v][parent[v]] += push;
            v = parent[v];
        }
        flow += push;
    }
}

fn subroute_ok(demand: &[i64], capacity: i64, y: &[i64]) -> bool {
    for i in 0..demand.len() {
        let (mut d, mut u) = (0, 0);
        for j in i..demand.len() {
            d += demand[j];
            u += y[j];
            if capacity * (u + 1) < d {
                return false;
            }
        }
    }
    true
}

/// `Σ_ξ p_ξ min {w^T y : y ∈ ∏[0, b_v], y a recourse action}` by enumeration.
pub fn brute_force_scenario_optimal(inst: &Instance, route: &Route, weights: &RecourseWeights) -> Result<Rat, OracleError> {
    let seq = route.customers();
    if seq.len() > 8 {
        return Err(OracleError::TooLarge(seq.len()));
    }
    let bounds: Vec<i64> = seq.iter().map(|&v| weights.b(v)).collect();
    let mut total = Rat::zero();
    for s in 0..inst.n_scenarios() {
        let demand: Vec<i64> = seq.iter().map(|&v| inst.demand(s, v)).collect();
        let mut best: Option<Rat> = None;
        let mut y = vec![0i64; seq.len()];
        loop {
            if subroute_ok(&demand, inst.capacity(), &y) {
                let cost: Rat = seq.iter().zip(&y).map(|(&v, &k)| weights.w(v) * int(k)).sum();
                if best.as_ref().is_none_or(|b| cost < *b) {
                    best = Some(cost);
                }
            }
            let mut i = 0;
            while i < y.len() && y[i] == bounds[i] {
                y[i] = 0;
                i += 1;
            }
            if i == y.len() {
                break;
            }
            y[i] += 1;
        }
        total += inst.probability(s) * best.ok_or(OracleError::Infeasible)?;
    }
    Ok(total)
}

/// Solves the covering LP of `route` in `scenario` for `trials` random
/// objectives and checks that every optimal vertex is integral.
pub fn hull_integrality_probe<R: Rng>(
    inst: &Instance,
    route: &Route,
    scenario: usize,
    bound: i64,
    trials: usize,
    rng: &mut R,
) -> bool {
    let seq = route.customers();
    let demand: Vec<i64> = seq.iter().map(|&v| inst.demand(scenario, v)).collect();
    let c = inst.capacity();
    let mut rows = Vec::new();
    for i in 0..seq.len() {
        let mut d = 0;
        for j in i..seq.len() {
            d += demand[j];
            let need = (d + c - 1) / c - 1;
            if need >= 1 {
                rows.push((i, j, need));
            }
        }
    }
    (0..trials).all(|_| {
        let mut model: LinearModel<()> = LinearModel::new();
        let vars: Vec<_> = seq
            .iter()
            .map(|_| {
                let obj = ratio(rng.gen_range(-40..=100), rng.gen_range(1..=7));
                model.add_var(0.0, bound as f64, crate::rational::to_f64(&obj), false)
            })
            .collect();
        for &(i, j, need) in &rows {
            model.add_row(LinearRow::new((i..=j).map(|k| (vars[k], 1.0)).collect(), Sense::Ge, need as f64));
        }
        match solve_lp(&model, None) {
            Ok(out) if out.status == SolveStatus::Optimal => {
                out.primal().iter().all(|v| (v - v.round()).abs() <= INTEGRALITY_TOL)
            }
            Ok(out) => out.status == SolveStatus::Infeasible,
            Err(_) => false,
        }
    })
}

/// Classical policy cost by direct simulation, allowing demands above capacity
/// (several round trips at one customer).
pub fn simulate_classical_cost(inst: &Instance, route: &Route) -> Rat {
    let c = inst.capacity();
    let cost_of = |seq: &[usize]| -> Rat {
        (0..inst.n_scenarios())
            .map(|s| {
                let mut residual = c;
                let mut trips = 0;
                for &v in seq {
                    let mut d = inst.demand(s, v);
                    while d > residual {
                        d -= residual;
                        residual = c;
                        trips += 2 * inst.cost(0, v);
                    }
                    residual -= d;
                }
                inst.probability(s) * int(trips)
            })
            .sum()
    };
    let fwd = cost_of(&route.directed(Direction::Forward));
    let rev = cost_of(&route.directed(Direction::Reverse));
    fwd.min(rev)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Recourse evaluation used by the enumeration oracle.
#[derive(Debug, Clone)]
pub struct OracleRecourse {
    pub kind: RecourseKind,
    pub weights: RecourseWeights,
}

/// Exhaustive optimum of `Σ c(R) + Q(R)` over all routing plans of the first-stage set.
///
/// Demands above capacity are preprocessed first and the forced trips added.
pub fn enumerate_optimal(
    inst: &Instance,
    first_stage: FirstStage,
    recourse: &OracleRecourse,
) -> Result<(Rat, RoutingPlan), OracleError> {
    let n = inst.n_customers();
    if n > 8 {
        return Err(OracleError::TooLarge(n));
    }
    let (inst, base) = preprocess_large_demands(inst);
    let full = (1usize << n) - 1;
    let members = |mask: usize| (1..=n).filter(|&v| mask & (1 << (v - 1)) != 0).collect::<Vec<_>>();
    let cap = int(inst.capacity());
    let mut best_route: HashMap<usize, (Rat, Route)> = HashMap::new();
    for mask in 1..=full {
        let set = members(mask);
        if first_stage == FirstStage::Cvrp {
            let expected: Rat = set.iter().map(|&v| inst.expected_demand(v)).sum();
            if expected > cap {
                continue;
            }
        }
        let mut best: Option<(Rat, Route)> = None;
        for order in permutations(&set) {
            if order.len() > 1 && order[0] > order[order.len() - 1] {
                continue;
            }
            let route = Route::new(order)?;
            let q = match recourse.kind {
                RecourseKind::Classical => simulate_classical_cost(&inst, &route),
                RecourseKind::ScenarioOptimal => brute_force_scenario_optimal(&inst, &route, &recourse.weights)?,
            };
            let total = int(route.cost(&inst)) + q;
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                best = Some((total, route));
            }
        }
        if let Some(b) = best {
            best_route.insert(mask, b);
        }
    }
    let fleet = match first_stage {
        FirstStage::Cvrp => Some(inst.require_fleet_size()?),
        FirstStage::Subtour => None,
    };
    let max_parts = fleet.unwrap_or(n);
    // best[parts][mask]: cheapest cover of `mask` by `parts` routes.
    let mut table: Vec<HashMap<usize, (Rat, Vec<usize>)>> = vec![HashMap::new(); max_parts + 1];
    table[0].insert(0, (Rat::zero(), vec![]));
    for parts in 1..=max_parts {
        let (done, rest) = table.split_at_mut(parts);
        let prev = &done[parts - 1];
        let cur = &mut rest[0];
        for (&mask, (value, chosen)) in prev {
            let free = full & !mask;
            if free == 0 {
                continue;
            }
            let low = free & free.wrapping_neg();
            let mut sub = free;
            while sub > 0 {
                if sub & low != 0 {
                    if let Some((q, _)) = best_route.get(&sub) {
                        let total = value + q;
                        let key = mask | sub;
                        if cur.get(&key).is_none_or(|(b, _)| total < *b) {
                            let mut routes = chosen.clone();
                            routes.push(sub);
                            cur.insert(key, (total, routes));
                        }
                    }
                }
                sub = (sub - 1) & free;
            }
        }
    }
    let candidates: Vec<&(Rat, Vec<usize>)> = match fleet {
        Some(k) => table[k].get(&full).into_iter().collect(),
        None => table.iter().filter_map(|t| t.get(&full)).collect(),
    };
    let (value, masks) = candidates
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0))
        .ok_or(OracleError::NoPlan)?;
    let routes = masks.iter().map(|m| best_route[m].1.clone()).collect();
    Ok((value + base, RoutingPlan::from_routes(n, routes)?))
}

/// Every routing plan of the first-stage set (routes up to reversal).
pub fn all_plans(inst: &Instance, first_stage: FirstStage) -> Result<Vec<RoutingPlan>, OracleError> {
    let n = inst.n_customers();
    if n > 7 {
        return Err(OracleError::TooLarge(n));
    }
    let fleet = match first_stage {
        FirstStage::Cvrp => Some(inst.require_fleet_size()?),
        FirstStage::Subtour => None,
    };
    let cap = int(inst.capacity());
    let mut out = Vec::new();
    let mut stack: Vec<Route> = Vec::new();
    extend_plans(inst, first_stage, fleet, &cap, (1..=n).collect(), &mut stack, &mut out)?;
    Ok(out)
}

fn extend_plans(
    inst: &Instance,
    first_stage: FirstStage,
    fleet: Option<usize>,
    cap: &Rat,
    free: Vec<usize>,
    stack: &mut Vec<Route>,
    out: &mut Vec<RoutingPlan>,
) -> Result<(), OracleError> {
    let Some((&head, rest)) = free.split_first() else {
        if fleet.is_none_or(|k| k == stack.len()) {
            out.push(RoutingPlan::from_routes(inst.n_customers(), stack.clone())?);
        }
        return Ok(());
    };
    if fleet.is_some_and(|k| stack.len() >= k) {
        return Ok(());
    }
    for mask in 0..(1usize << rest.len()) {
        let mut members = vec![head];
        members.extend(rest.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v));
        if first_stage == FirstStage::Cvrp {
            let expected: Rat = members.iter().map(|&v| inst.expected_demand(v)).sum();
            if &expected > cap {
                continue;
            }
        }
        let remaining: Vec<usize> = rest.iter().enumerate().filter(|(i, _)| mask & (1 << i) == 0).map(|(_, &v)| v).collect();
        for order in permutations(&members) {
            if order.len() > 1 && order[0] > order[order.len() - 1] {
                continue;
            }
            stack.push(Route::new(order)?);
            extend_plans(inst, first_stage, fleet, cap, remaining.clone(), stack, out)?;
            stack.pop();
        }
    }
    Ok(())
}
