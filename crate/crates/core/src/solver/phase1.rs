use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num::{Signed, Zero};

use super::columns::{add_columns, add_degree_rows, Columns};
use super::{Prepared, SolverConfig, SolverError};
use crate::cuts::{aggregate_sri, AggregatedSriCut, CutKind, DualCertificate, LinearCut, VIOLATION_TOL};
use crate::lp::{solve_lp, LinearModel, LinearRow, Sense, SolveStatus};
use crate::rational::{clean_float, int, Rat};
use crate::separation::{separate_capacity_sets, separate_sri_heuristic, separate_sri_milp};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum RowTag {
    Sri(AggregatedSriCut),
    Bound(usize, usize),
}

/// Cleaned duals of the aggregated SRI rows (`ι ≥ 0`) and of the recourse
/// bounds `y^ξ_v ≤ b_v` (`β ≤ 0`), repaired to be dual feasible.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DualBundle {
    pub iota: BTreeMap<AggregatedSriCut, Rat>,
    pub beta: BTreeMap<(usize, usize), Rat>,
    pub value: f64,
}

impl DualBundle {
    /// `α^ξ_S = Σ_{Ξ∋ξ} ι^Ξ_S` together with `β`.
    pub fn certificate(&self) -> DualCertificate {
        let mut cert = DualCertificate::default();
        for (cut, iota) in &self.iota {
            for &s in &cut.scenarios {
                cert.add_alpha(s, &cut.set, iota.clone());
            }
        }
        for (&(s, v), b) in &self.beta {
            cert.add_beta(s, v, b.clone());
        }
        cert
    }
}

#[derive(Debug, Clone)]
pub struct Phase1 {
    /// LP value without the preprocessing base cost.
    pub value: f64,
    pub duals: DualBundle,
    /// Capacity and subtour cuts separated on the way.
    pub pool: Vec<LinearCut>,
    pub sri_cuts: Vec<AggregatedSriCut>,
    pub rounds: usize,
    pub converged: bool,
    pub elapsed: Duration,
}

/// Cutting-plane loop on the LP over `(x, y)` with objective
/// `cᵀx + Σ_ξ p_ξ wᵀy^ξ`: capacity cuts first, then aggregated SRIs from the
/// heuristic and, failing that, from the per-scenario MIP.
pub fn solve_root_phase1(prep: &Prepared, cfg: &SolverConfig, limit: Duration) -> Result<Phase1, SolverError> {
    let started = Instant::now();
    let inst = &prep.inst;
    let n = inst.n_customers();
    let big_n = inst.n_scenarios();
    let cols = Columns::y_space(n, big_n);
    let mut model: LinearModel<RowTag> = LinearModel::new();
    add_columns(&mut model, prep, &cols);
    add_degree_rows(&mut model, prep, &cols);
    for s in 0..big_n {
        for v in 1..=n {
            let row = LinearRow::new(vec![(cols.y(s, v), 1.0)], Sense::Le, prep.weights.b(v) as f64);
            model.add_tagged_row(row, RowTag::Bound(s, v));
        }
    }
    let kind = if prep.fleet.is_some() { CutKind::Rci } else { CutKind::Sec };
    let mut pool = Vec::new();
    let mut sri_cuts = Vec::new();
    let mut rounds = 0;
    let mut converged = false;
    let mut last = None;
    loop {
        let remaining = limit.checked_sub(started.elapsed()).unwrap_or_default();
        if last.is_some() && remaining.is_zero() {
            break;
        }
        let lp = model.relaxed();
        let out = solve_lp(&lp, last.is_some().then_some(remaining))?;
        match out.status {
            SolveStatus::Optimal => {}
            SolveStatus::Infeasible => return Err(SolverError::Infeasible("root LP".into())),
            SolveStatus::TimeLimit | SolveStatus::IterationLimit if last.is_some() => break,
            other => return Err(SolverError::Lp(crate::lp::LpError::Backend(format!("{other:?}")))),
        }
        rounds += 1;
        let (x, y) = cols.split_y(out.primal());
        last = Some(out);
        let vehicles = |s: &[usize]| prep.k_prime(s);
        let sets = separate_capacity_sets(&x, n, &vehicles, VIOLATION_TOL);
        if !sets.is_empty() {
            for (set, _) in sets {
                let cut = LinearCut::capacity(kind, &set, prep.k_prime(&set));
                model.add_row(cols.row(&cut));
                pool.push(cut);
            }
            continue;
        }
        let mut found = separate_sri_heuristic(inst, &x, &y, &prep.scenario_order, VIOLATION_TOL);
        if found.is_empty() {
            for &s in &prep.scenario_order {
                let remaining = limit.checked_sub(started.elapsed()).unwrap_or_default();
                if remaining.is_zero() {
                    break;
                }
                if let Some(set) = separate_sri_milp(inst, &x, &y, s, Some(remaining.min(cfg.milp_limit)))? {
                    found.extend(aggregate_sri(inst, &x, &y, &set, VIOLATION_TOL)?);
                    break;
                }
            }
        }
        if found.is_empty() {
            converged = true;
            break;
        }
        for cut in found {
            if model.row_by_tag(&RowTag::Sri(cut.clone())).is_some() {
                continue;
            }
            model.add_tagged_row(cols.row(&cut.to_cut(inst)), RowTag::Sri(cut.clone()));
            sri_cuts.push(cut);
        }
    }
    let out = last.expect("first LP always solved");
    let duals = extract_duals(prep, &model, &out);
    Ok(Phase1 { value: out.objective, duals, pool, sri_cuts, rounds, converged, elapsed: started.elapsed() })
}

fn extract_duals(prep: &Prepared, model: &LinearModel<RowTag>, out: &crate::lp::SolveOutcome) -> DualBundle {
    let inst = &prep.inst;
    let mut bundle = DualBundle { value: out.objective, ..Default::default() };
    let n_rows = out.duals.as_ref().map_or(0, Vec::len);
    for (row, tag) in model.tagged_rows() {
        let d = if row.0 < n_rows { clean_float(out.dual(row)) } else { Rat::zero() };
        match tag {
            RowTag::Sri(cut) if d.is_positive() => {
                bundle.iota.insert(cut.clone(), d);
            }
            RowTag::Bound(s, v) if d.is_negative() => {
                bundle.beta.insert((*s, *v), d);
            }
            _ => {}
        }
    }
    let mut alpha: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
    for (cut, iota) in &bundle.iota {
        for &s in &cut.scenarios {
            for &v in &cut.set {
                *alpha.entry((s, v)).or_insert_with(Rat::zero) += iota;
            }
        }
    }
    for s in 0..inst.n_scenarios() {
        for v in inst.customers() {
            let a = alpha.get(&(s, v)).cloned().unwrap_or_else(Rat::zero);
            let room = inst.probability(s) * prep.weights.w(v) - a;
            let b = bundle.beta.get(&(s, v)).cloned().unwrap_or_else(Rat::zero);
            let repaired = b.min(room).min(int(0));
            if repaired.is_zero() {
                bundle.beta.remove(&(s, v));
            } else {
                bundle.beta.insert((s, v), repaired);
            }
        }
    }
    bundle
}
