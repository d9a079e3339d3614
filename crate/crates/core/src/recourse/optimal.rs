use std::time::Duration;

use num::Zero;

use super::{check_capacity, RecourseBreakdown, RecourseError, RecoursePolicy, RecourseWeights};
use crate::lp::{solve_lp, LinearModel, LinearRow, Sense, SolveStatus, VarId, INTEGRALITY_TOL};
use crate::model::{Instance, Route};
use crate::rational::{ceil_div, int, to_f64, Rat};

/// Covering constraint `y(B_first ∪ … ∪ B_last) ≥ rhs` over consecutive blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoveringRow {
    pub first: usize,
    pub last: usize,
    pub rhs: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSelection {
    /// Every consecutive block range with `k − 1 ≥ 1`.
    All,
    /// Only ranges whose one-block shrinkings need strictly fewer vehicles.
    Minimal,
}

/// Rows `y(H') ≥ k(H') − 1` for consecutive block ranges `H'` of `blocks`.
pub fn covering_rows(blocks: &[Vec<usize>], demand: &[i64], capacity: i64, selection: RowSelection) -> Vec<CoveringRow> {
    let m = blocks.len();
    let block_demand: Vec<i64> = blocks.iter().map(|b| b.iter().map(|&v| demand[v]).sum()).collect();
    let mut prefix = vec![0i64; m + 1];
    for i in 0..m {
        prefix[i + 1] = prefix[i] + block_demand[i];
    }
    let k = |i: usize, j: usize| ceil_div(prefix[j + 1] - prefix[i], capacity);
    let mut rows = Vec::new();
    for i in 0..m {
        for j in i..m {
            let need = k(i, j);
            if need < 2 {
                continue;
            }
            let minimal = i == j || (k(i + 1, j) < need && k(i, j - 1) < need);
            if selection == RowSelection::All || minimal {
                rows.push(CoveringRow { first: i, last: j, rhs: need - 1 });
            }
        }
    }
    rows
}

/// Optimal integral solution of the covering LP with its row duals.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringSolution {
    pub value: Rat,
    /// `(customer, y)` in block order.
    pub y: Vec<(usize, i64)>,
    pub rows: Vec<CoveringRow>,
    pub duals: Vec<f64>,
}

/// Solves `min Σ w_v y_v` s.t. the covering rows over `blocks`, `0 ≤ y ≤ b`.
///
/// The constraint matrix has consecutive ones, so the simplex vertex is
/// integral; it is rounded and re-checked exactly.
pub fn solve_covering_lp(
    blocks: &[Vec<usize>],
    demand: &[i64],
    capacity: i64,
    weights: &RecourseWeights,
    selection: RowSelection,
) -> Result<CoveringSolution, RecourseError> {
    let rows = covering_rows(blocks, demand, capacity, selection);
    let customers: Vec<usize> = blocks.iter().flatten().copied().collect();
    if rows.is_empty() {
        return Ok(CoveringSolution { value: Rat::zero(), y: customers.iter().map(|&v| (v, 0)).collect(), rows, duals: vec![] });
    }
    let mut start = vec![0usize; blocks.len() + 1];
    for (i, b) in blocks.iter().enumerate() {
        start[i + 1] = start[i] + b.len();
    }
    let mut model: LinearModel<()> = LinearModel::new();
    let vars: Vec<VarId> = customers
        .iter()
        .map(|&v| model.add_var(0.0, weights.b(v) as f64, to_f64(weights.w(v)), false))
        .collect();
    for r in &rows {
        let coeffs = (start[r.first]..start[r.last + 1]).map(|i| (vars[i], 1.0)).collect();
        model.add_row(LinearRow::new(coeffs, Sense::Ge, r.rhs as f64));
    }
    let out = solve_lp(&model, Some(Duration::from_secs(60)))?;
    match out.status {
        SolveStatus::Optimal => {}
        SolveStatus::Infeasible => return Err(RecourseError::Infeasible),
        _ => return Err(RecourseError::Lp(crate::lp::LpError::Backend(format!("{:?}", out.status)))),
    }
    let mut y = Vec::with_capacity(customers.len());
    for (&v, &val) in customers.iter().zip(out.primal()) {
        let r = val.round();
        if (val - r).abs() > INTEGRALITY_TOL {
            return Err(RecourseError::NonIntegralVertex);
        }
        y.push((v, r as i64));
    }
    for r in &rows {
        let covered: i64 = y[start[r.first]..start[r.last + 1]].iter().map(|&(_, k)| k).sum();
        if covered < r.rhs {
            return Err(RecourseError::NonIntegralVertex);
        }
    }
    let value: Rat = y.iter().map(|&(v, k)| weights.w(v) * int(k)).sum();
    if (to_f64(&value) - out.objective).abs() > 1e-6 * out.objective.abs().max(1.0) {
        return Err(RecourseError::NonIntegralVertex);
    }
    Ok(CoveringSolution { value, y, rows, duals: out.duals.unwrap_or_default() })
}

/// `Q*(R)` with the optimal integer policy and the per-customer split
/// `Σ_ξ p_ξ w_v y^ξ_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOptimal {
    pub value: Rat,
    pub policy: RecoursePolicy,
    pub breakdown: RecourseBreakdown,
}

pub fn scenario_optimal_recourse(
    inst: &Instance,
    route: &Route,
    weights: &RecourseWeights,
) -> Result<ScenarioOptimal, RecourseError> {
    scenario_optimal_with(inst, route, weights, RowSelection::All)
}

/// `Q*(R)` computed with the chosen covering rows.
pub fn scenario_optimal_value(
    inst: &Instance,
    route: &Route,
    weights: &RecourseWeights,
    selection: RowSelection,
) -> Result<Rat, RecourseError> {
    Ok(scenario_optimal_with(inst, route, weights, selection)?.value)
}

fn scenario_optimal_with(
    inst: &Instance,
    route: &Route,
    weights: &RecourseWeights,
    selection: RowSelection,
) -> Result<ScenarioOptimal, RecourseError> {
    check_capacity(inst, route.customers())?;
    let blocks: Vec<Vec<usize>> = route.customers().iter().map(|&v| vec![v]).collect();
    let bound = (0..weights.len()).map(|v| weights.b(v)).collect();
    let mut policy = RecoursePolicy::zeros(inst.n_scenarios(), inst.n_customers(), bound);
    let mut value = Rat::zero();
    let mut parts = Vec::new();
    for s in 0..inst.n_scenarios() {
        let sol = solve_covering_lp(&blocks, inst.scenario_demands(s), inst.capacity(), weights, selection)?;
        let p = inst.probability(s);
        value += p * &sol.value;
        for (v, k) in sol.y {
            policy.y[s][v] = k;
            parts.push((v, p * weights.w(v) * int(k)));
        }
    }
    let mut breakdown = RecourseBreakdown::from_parts(parts);
    for &v in route.customers() {
        breakdown.per_customer.entry(v).or_insert_with(Rat::zero);
    }
    debug_assert_eq!(breakdown.total, value);
    Ok(ScenarioOptimal { value, policy, breakdown })
}
