use std::time::Instant;

use num::Zero;

use super::columns::{add_columns, add_degree_rows, Columns};
use super::phase1::Phase1;
use super::{Prepared, SolverConfig, SolverError};
use crate::cuts::{projected_aggregated_sri, CutKind, LinearCut, Projection};
use crate::lp::{solve_lp_optimal, LinearModel};
use crate::separation::{separation_round, SeparationContext};

/// LP over `(x, θ)` carrying every cut found so far.
#[derive(Debug, Clone)]
pub struct RootRelaxation {
    pub model: LinearModel,
    pub(crate) cols: Columns,
    pub cuts: Vec<LinearCut>,
    /// Value right after the projected phase-1 cuts went in.
    pub projected_value: f64,
    /// Value after the fractional separation rounds.
    pub value: f64,
    pub single_cut_added: bool,
    pub rounds: usize,
}

impl RootRelaxation {
    pub(crate) fn add_cut(&mut self, cut: LinearCut) {
        self.model.add_row(self.cols.row(&cut));
        self.cuts.push(cut);
    }

    pub fn solve(&self) -> Result<(f64, Vec<f64>, Vec<f64>), SolverError> {
        let out = solve_lp_optimal(&self.model.relaxed(), None)?;
        let (x, theta) = self.cols.split_theta(out.primal());
        Ok((out.objective, x, theta))
    }
}

/// First-stage rows plus the projected aggregated SRI of every phase-1 row
/// with a positive dual. When the result falls short of the phase-1 value,
/// the single projected SRI of the whole dual certificate is added as well.
pub fn build_root_relaxation(
    prep: &Prepared,
    _cfg: &SolverConfig,
    phase1: Option<&Phase1>,
) -> Result<RootRelaxation, SolverError> {
    let cols = Columns::theta_space(prep.inst.n_customers());
    let mut model = LinearModel::new();
    add_columns(&mut model, prep, &cols);
    add_degree_rows(&mut model, prep, &cols);
    let mut root = RootRelaxation {
        model,
        cols,
        cuts: Vec::new(),
        projected_value: 0.0,
        value: 0.0,
        single_cut_added: false,
        rounds: 0,
    };
    if let Some(p1) = phase1 {
        for cut in &p1.pool {
            root.add_cut(cut.clone());
        }
        for agg in p1.duals.iota.keys() {
            if agg.set.iter().any(|&v| prep.weights.w(v).is_zero()) {
                continue;
            }
            let cut = projected_aggregated_sri(&prep.inst, &agg.set, &agg.scenarios, &prep.weights)?;
            root.add_cut(cut.to_cut(CutKind::ProjectedAggregatedSri));
        }
    }
    let (mut value, _, _) = root.solve()?;
    if let Some(p1) = phase1 {
        if value < p1.value - 1e-6 {
            if let Projection::Cut(cut) = p1.duals.certificate().project(&prep.inst, &prep.weights)? {
                root.add_cut(cut.to_cut(CutKind::ProjectedSri));
                root.single_cut_added = true;
                value = root.solve()?.0;
            }
        }
    }
    root.projected_value = value;
    root.value = value;
    Ok(root)
}

/// Fractional separation rounds at the root until no violated cut is found,
/// the round cap is hit or `deadline` passes.
pub(crate) fn separate_root(
    prep: &Prepared,
    cfg: &SolverConfig,
    root: &mut RootRelaxation,
    deadline: Instant,
) -> Result<(), SolverError> {
    for _ in 0..cfg.root_rounds {
        if Instant::now() >= deadline {
            break;
        }
        let (value, x, theta) = root.solve()?;
        root.value = value;
        let ctx = SeparationContext {
            inst: &prep.inst,
            x: &x,
            theta: &theta,
            y: None,
            use_sri: cfg.mode.uses_sri(),
            recourse: cfg.recourse,
            first_stage: cfg.first_stage,
            weights: &prep.weights,
            classical_weights: &prep.classical_weights,
            scenario_order: prep.scenario_order.clone(),
        };
        let cuts = separation_round(&ctx)?;
        if cuts.is_empty() {
            return Ok(());
        }
        root.rounds += 1;
        for cut in cuts {
            root.add_cut(cut);
        }
    }
    root.value = root.solve()?.0;
    Ok(())
}
