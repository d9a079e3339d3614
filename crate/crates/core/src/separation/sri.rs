use std::time::Duration;

use super::capacity::separate_rci;
use super::SeparationError;
use crate::cuts::{sri_violation, AggregatedSriCut};
use crate::lp::{solve_mip, LinearModel, LinearRow, Sense, SolveStatus};
use crate::model::{edge_index, Instance};
use crate::rational::ceil_div;

pub const MILP_THRESHOLD: f64 = 0.01;
pub const MILP_EPSILON: f64 = 0.5;

/// Aggregated SRIs found by running the capacity heuristic on each scenario's
/// demand vector. Scenarios are visited in `order`; the scan stops after the
/// first scenario that yields any violated pair.
pub fn separate_sri_heuristic(
    inst: &Instance,
    x: &[f64],
    y: &[Vec<f64>],
    order: &[usize],
    tol: f64,
) -> Vec<AggregatedSriCut> {
    let mut out: Vec<AggregatedSriCut> = Vec::new();
    for &s in order {
        for set in separate_rci(x, inst.scenario_demands(s), inst.capacity(), tol) {
            let scenarios: Vec<usize> = (0..inst.n_scenarios())
                .filter(|&t| sri_violation(inst, x, y, &set, t).is_ok_and(|v| v > tol))
                .collect();
            if !scenarios.is_empty() && !out.iter().any(|c| c.set == set) {
                out.push(AggregatedSriCut { set, scenarios });
            }
        }
        if !out.is_empty() {
            break;
        }
    }
    out
}

/// Feasibility MIP for a set `S` with SRI violation at least [`MILP_THRESHOLD`]
/// in `scenario`.
///
/// `γ C ≤ d(S) − ε` bounds `γ + 1` by `k(S)`, and
/// `(γ + 1) − Σ (ȳ_v + 1) q_v + Σ x̄_e h_e ≥ threshold` with `h_e ≤ q_u, q_v`.
pub fn separate_sri_milp(
    inst: &Instance,
    x: &[f64],
    y: &[Vec<f64>],
    scenario: usize,
    time_limit: Option<Duration>,
) -> Result<Option<Vec<usize>>, SeparationError> {
    let n = inst.n_customers();
    let demand = inst.scenario_demands(scenario);
    let total: i64 = demand.iter().sum();
    let cap = inst.capacity();
    let mut model: LinearModel = LinearModel::new();
    let gamma = model.add_var(0.0, ceil_div(total, cap) as f64, 0.0, true);
    let q: Vec<_> = (0..=n).map(|v| (v > 0).then(|| model.add_var(0.0, 1.0, 0.0, true))).collect();
    let mut cover = vec![(gamma, -(cap as f64))];
    let mut violation = vec![(gamma, 1.0)];
    for v in 1..=n {
        let qv = q[v].unwrap();
        cover.push((qv, demand[v] as f64));
        violation.push((qv, -(y[scenario][v] + 1.0)));
    }
    model.add_row(LinearRow::new(cover, Sense::Ge, MILP_EPSILON));
    for u in 1..=n {
        for v in u + 1..=n {
            let xe = x[edge_index(u, v)];
            if xe <= 1e-9 {
                continue;
            }
            let h = model.add_var(0.0, 1.0, 0.0, false);
            let (qu, qv) = (q[u].unwrap(), q[v].unwrap());
            model.add_row(LinearRow::new(vec![(h, 1.0), (qu, -1.0)], Sense::Le, 0.0));
            model.add_row(LinearRow::new(vec![(h, 1.0), (qv, -1.0)], Sense::Le, 0.0));
            model.add_row(LinearRow::new(vec![(h, 1.0), (qu, -1.0), (qv, -1.0)], Sense::Ge, -1.0));
            violation.push((h, xe));
        }
    }
    model.add_row(LinearRow::new(violation, Sense::Ge, MILP_THRESHOLD - 1.0));
    let outcome = solve_mip(&model, time_limit)?;
    let Some(sol) = outcome.primal.as_ref().filter(|_| outcome.status == SolveStatus::Optimal) else {
        return Ok(None);
    };
    let set: Vec<usize> = (1..=n).filter(|&v| sol[q[v].unwrap().0] > 0.5).collect();
    if set.is_empty() {
        return Ok(None);
    }
    let viol = sri_violation(inst, x, y, &set, scenario)?;
    Ok((viol >= MILP_THRESHOLD - 1e-9).then_some(set))
}
