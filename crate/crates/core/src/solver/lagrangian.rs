use std::collections::BTreeMap;

use num::{Signed, Zero};

use super::columns::{add_columns, add_degree_rows, Columns};
use super::{Prepared, SolverError};
use crate::cuts::{AggregatedSriCut, CutError, LinearCut};
use crate::lp::{solve_lp_optimal, LinearModel};
use crate::model::{all_edges, edge_index};
use crate::rational::{int, to_f64, Rat};

/// `σ_x + σ_y + ν` for multipliers `ι ≥ 0` on aggregated SRIs and `β ≤ 0` on
/// the recourse bounds. `σ_x` minimises the multiplier-adjusted edge costs over
/// the first-stage rows and `pool`; `σ_y` is 0 when every `y` coefficient
/// `p_ξ w_v − Σα − β` is nonnegative and `−∞` otherwise.
pub fn lagrangian_bound(
    prep: &Prepared,
    pool: &[LinearCut],
    iota: &BTreeMap<AggregatedSriCut, Rat>,
    beta: &BTreeMap<(usize, usize), Rat>,
) -> Result<f64, SolverError> {
    if iota.values().any(Signed::is_negative) || beta.values().any(Signed::is_positive) {
        return Err(CutError::DualSign.into());
    }
    let inst = &prep.inst;
    let n = inst.n_customers();
    let mut alpha: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
    let mut edge_shift = vec![Rat::zero(); crate::model::edge_count(n)];
    let mut nu = Rat::zero();
    for (cut, i) in iota {
        let m = cut.scenarios.len() as i64;
        for &s in &cut.scenarios {
            nu += i * int(inst.scenario_vehicles(s, &cut.set) - cut.set.len() as i64);
            for &v in &cut.set {
                *alpha.entry((s, v)).or_insert_with(Rat::zero) += i;
            }
        }
        for (a, &u) in cut.set.iter().enumerate() {
            for &v in &cut.set[a + 1..] {
                edge_shift[edge_index(u, v)] += i * int(m);
            }
        }
    }
    for (&(_, v), b) in beta {
        nu += b * int(prep.weights.b(v));
    }
    for s in 0..inst.n_scenarios() {
        for v in inst.customers() {
            let a = alpha.get(&(s, v)).cloned().unwrap_or_else(Rat::zero);
            let b = beta.get(&(s, v)).cloned().unwrap_or_else(Rat::zero);
            if inst.probability(s) * prep.weights.w(v) - a - b < Rat::zero() {
                return Ok(f64::NEG_INFINITY);
            }
        }
    }
    let cols = Columns::theta_space(n);
    let mut model: LinearModel = LinearModel::new();
    add_columns(&mut model, prep, &cols);
    add_degree_rows(&mut model, prep, &cols);
    for cut in pool {
        model.add_row(cols.row(cut));
    }
    let mut relaxed = model.relaxed();
    for e in all_edges(n) {
        let i = e.index();
        relaxed.set_objective(cols.x(i), inst.cost(e.u, e.v) as f64 + to_f64(&edge_shift[i]));
    }
    let sigma_x = solve_lp_optimal(&relaxed, None)?.objective;
    Ok(sigma_x + to_f64(&nu))
}
