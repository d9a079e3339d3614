use num::Zero;

use super::{check_capacity, RecourseBreakdown, RecourseError, RecoursePolicy};
use crate::model::{Direction, Instance, Route};
use crate::rational::{ceil_div, int, Rat};

/// Drives the route in `direction` and records a depot round trip at each
/// customer whose demand does not fit in the residual capacity.
///
/// Counts are aligned with the directed customer sequence.
pub fn simulate_classical(
    inst: &Instance,
    route: &Route,
    direction: Direction,
    scenario: usize,
) -> Result<Vec<i64>, RecourseError> {
    check_capacity(inst, route.customers())?;
    let c = inst.capacity();
    let mut residual = c;
    Ok(route
        .directed(direction)
        .into_iter()
        .map(|v| {
            let d = inst.demand(scenario, v);
            if d > residual {
                residual += c - d;
                1
            } else {
                residual -= d;
                0
            }
        })
        .collect())
}

/// Failure counts from the closed form
/// `#{t ≥ 1 : Σ_{i<j} d_i ≤ tC < Σ_{i≤j} d_i}`, aligned with the directed sequence.
pub fn classical_formula_counts(inst: &Instance, seq: &[usize], scenario: usize) -> Vec<i64> {
    let c = inst.capacity();
    let mut before = 0;
    seq.iter()
        .map(|&v| {
            let after = before + inst.demand(scenario, v);
            let count = (ceil_div(after, c) - ceil_div(before, c).max(1)).max(0);
            before = after;
            count
        })
        .collect()
}

fn directed_cost(inst: &Instance, seq: &[usize]) -> (Rat, Vec<Vec<i64>>) {
    let mut total = Rat::zero();
    let mut counts = Vec::with_capacity(inst.n_scenarios());
    for s in 0..inst.n_scenarios() {
        let row = classical_formula_counts(inst, seq, s);
        let trips: i64 = seq.iter().zip(&row).map(|(&v, &k)| 2 * inst.cost(0, v) * k).sum();
        total += inst.probability(s) * int(trips);
        counts.push(row);
    }
    (total, counts)
}

/// Cheaper orientation (forward on ties) and its per-scenario counts as a policy.
pub fn classical_policy(inst: &Instance, route: &Route) -> Result<(Direction, RecoursePolicy), RecourseError> {
    check_capacity(inst, route.customers())?;
    let forward = route.directed(Direction::Forward);
    let reverse = route.directed(Direction::Reverse);
    let (fc, fcounts) = directed_cost(inst, &forward);
    let (rc, rcounts) = directed_cost(inst, &reverse);
    let (direction, seq, counts) =
        if rc < fc { (Direction::Reverse, reverse, rcounts) } else { (Direction::Forward, forward, fcounts) };
    let mut bound = vec![1; inst.n_customers() + 1];
    bound[0] = 0;
    let mut policy = RecoursePolicy::zeros(inst.n_scenarios(), inst.n_customers(), bound);
    for (s, row) in counts.iter().enumerate() {
        for (&v, &k) in seq.iter().zip(row) {
            policy.y[s][v] = k;
        }
    }
    Ok((direction, policy))
}

/// `Q_C(R)`: expected cost of the classical policy in the cheaper orientation,
/// split per failing customer.
pub fn classical_recourse(inst: &Instance, route: &Route) -> Result<RecourseBreakdown, RecourseError> {
    let (_, policy) = classical_policy(inst, route)?;
    let mut parts = Vec::new();
    for &v in route.customers() {
        let q: Rat = (0..inst.n_scenarios())
            .map(|s| inst.probability(s) * int(2 * inst.cost(0, v) * policy.y[s][v]))
            .sum();
        parts.push((v, q));
    }
    Ok(RecourseBreakdown::from_parts(parts))
}
