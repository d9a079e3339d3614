use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use super::columns::Columns;
use super::phase1::solve_root_phase1;
use super::report::{RouteReport, SolveReport, Status};
use super::root::{build_root_relaxation, separate_root};
use super::{Prepared, SolverConfig, SolverError};
use crate::cuts::{activation_path, activation_route, partial_route_bundle, CutKind, LinearCut, Point};
use crate::lp::{solve_mip_with_lazy, LinearRow, LpError, SolveStatus};
use crate::model::{inner_sum, Instance, PartialRoute, Route, RoutingPlan};
use crate::rational::{int, to_f64, Rat};
use crate::recourse::{classical_recourse, scenario_optimal_recourse, RecourseBreakdown, RecourseKind};
use crate::separation::{separation_round, support_components, SeparationContext};

const COVER_TOL: f64 = 1e-6;

struct Verifier<'a> {
    prep: &'a Prepared,
    cfg: &'a SolverConfig,
    cols: Columns,
    cache: HashMap<Vec<usize>, RecourseBreakdown>,
    best: Option<(Rat, RoutingPlan)>,
    cuts: Vec<LinearCut>,
    error: Option<SolverError>,
}

impl Verifier<'_> {
    fn recourse(&mut self, route: &Route) -> Result<RecourseBreakdown, SolverError> {
        let key = route.canonical().customers().to_vec();
        if let Some(q) = self.cache.get(&key) {
            return Ok(q.clone());
        }
        let q = match self.cfg.recourse {
            RecourseKind::Classical => classical_recourse(&self.prep.inst, route)?,
            RecourseKind::ScenarioOptimal => scenario_optimal_recourse(&self.prep.inst, route, &self.prep.weights)?.breakdown,
        };
        self.cache.insert(key, q.clone());
        Ok(q)
    }

    fn rows(&mut self, primal: &[f64]) -> Vec<LinearRow> {
        match self.check(primal) {
            Ok(cuts) => {
                let rows = cuts.iter().map(|c| self.cols.row(c)).collect();
                self.cuts.extend(cuts);
                rows
            }
            Err(e) => {
                self.error.get_or_insert(e);
                Vec::new()
            }
        }
    }

    /// Violated cuts at an integer candidate; empty once the candidate is a
    /// feasible plan whose θ covers the exact recourse of every route.
    fn check(&mut self, primal: &[f64]) -> Result<Vec<LinearCut>, SolverError> {
        let inst = &self.prep.inst;
        let n = inst.n_customers();
        let (x, theta) = self.cols.split_theta(primal);
        let xr: Vec<f64> = x.iter().map(|v| v.round()).collect();
        let kind = if self.prep.fleet.is_some() { CutKind::Rci } else { CutKind::Sec };
        let mut cuts = Vec::new();
        for comp in support_components(&xr, n) {
            let k = self.prep.k_prime(&comp);
            let cut = LinearCut::capacity(kind, &comp, k);
            if inner_sum(&xr, &comp) > (comp.len() as i64 - k) as f64 + 0.5
                && cut.violation(Point { x: &x, theta: &theta, y: None }) > COVER_TOL
            {
                cuts.push(cut);
            }
        }
        if !cuts.is_empty() {
            return Ok(cuts);
        }
        let xu: Vec<u8> = xr.iter().map(|&v| v as u8).collect();
        let plan = crate::model::routes_of(n, &xu)?;
        let mut value = int(plan.routing_cost(inst)) + &self.prep.base_cost;
        let mut qs = Vec::new();
        for route in plan.routes() {
            let q = self.recourse(route)?;
            value += &q.total;
            qs.push(q.total);
        }
        if self.best.as_ref().is_none_or(|(b, _)| value < *b) {
            self.best = Some((value, plan.clone()));
        }
        let ctx = SeparationContext {
            inst,
            x: &x,
            theta: &theta,
            y: None,
            use_sri: self.cfg.mode.uses_sri(),
            recourse: self.cfg.recourse,
            first_stage: self.cfg.first_stage,
            weights: &self.prep.weights,
            classical_weights: &self.prep.classical_weights,
            scenario_order: self.prep.scenario_order.clone(),
        };
        let mut cuts = separation_round(&ctx)?;
        if !cuts.is_empty() {
            return Ok(cuts);
        }
        let point = Point { x: &x, theta: &theta, y: None };
        for (route, q) in plan.routes().iter().zip(qs) {
            if route.len() < 2 {
                continue;
            }
            let covered: f64 = route.customers().iter().map(|&v| theta[v]).sum();
            if covered >= to_f64(&q) - COVER_TOL {
                continue;
            }
            let cut = self.exactness_cut(route, &q)?;
            if cut.violation(point) > COVER_TOL {
                cuts.push(cut);
            } else {
                let fallback = self.path_cut(route, &q);
                debug_assert!(fallback.violation(point) > COVER_TOL);
                cuts.push(fallback);
            }
        }
        Ok(cuts)
    }

    fn path_cut(&self, route: &Route, q: &Rat) -> LinearCut {
        match self.cfg.recourse {
            RecourseKind::Classical => {
                LinearCut::theta_bound(CutKind::RouteCut, route.customers(), q, &activation_route(route))
            }
            RecourseKind::ScenarioOptimal => {
                LinearCut::theta_bound(CutKind::PathCut, route.customers(), q, &activation_path(route))
            }
        }
    }

    fn exactness_cut(&self, route: &Route, q: &Rat) -> Result<LinearCut, SolverError> {
        if self.cfg.mode == super::Mode::Sri {
            let h = PartialRoute::from_route(route);
            if let Ok(bundle) = partial_route_bundle(&self.prep.inst, &h, &self.prep.weights) {
                if let Some(dom) = bundle.dominating {
                    return Ok(dom.to_cut(CutKind::ProjectedSri));
                }
            }
        }
        Ok(self.path_cut(route, q))
    }
}

/// Solves the instance to optimality or until the time limit.
pub fn solve(inst: &Instance, cfg: &SolverConfig) -> Result<SolveReport, SolverError> {
    let started = Instant::now();
    let deadline = started + cfg.time_limit;
    let prep = Prepared::new(inst, cfg)?;
    let base = to_f64(&prep.base_cost);

    let phase1 = if cfg.mode.uses_sri() {
        let limit = cfg.phase1_limit.min(cfg.time_limit);
        Some(solve_root_phase1(&prep, cfg, limit)?)
    } else {
        None
    };
    let phase1_time = started.elapsed();
    let root_started = Instant::now();
    let mut root = build_root_relaxation(&prep, cfg, phase1.as_ref())?;
    separate_root(&prep, cfg, &mut root, deadline)?;
    let root_time = root_started.elapsed();
    let root_bound = root.value + base;

    let mut verifier = Verifier {
        prep: &prep,
        cfg,
        cols: root.cols,
        cache: HashMap::new(),
        best: None,
        cuts: Vec::new(),
        error: None,
    };
    let remaining = deadline.saturating_duration_since(Instant::now()).max(Duration::from_millis(1));
    let mut model = root.model.clone();
    let lazy = solve_mip_with_lazy(&mut model, |p| verifier.rows(p), Some(remaining));
    if let Some(e) = verifier.error.take() {
        return Err(e);
    }
    let lazy = match lazy {
        Ok(l) => l,
        Err(LpError::Infeasible) => return Err(SolverError::Infeasible("no feasible routing plan".into())),
        Err(e) => return Err(e.into()),
    };

    if lazy.outcome.status != SolveStatus::Optimal {
        if let Some(p) = lazy.outcome.primal.clone() {
            verifier.check(&p)?;
        }
    }
    let status = match lazy.outcome.status {
        SolveStatus::Optimal => Status::Optimal,
        _ => Status::TimeLimit,
    };
    let mip_bound = lazy.outcome.dual_bound + base;
    let bound = if mip_bound.is_finite() { mip_bound.max(root_bound) } else { root_bound };
    let (value, plan) = match verifier.best.take() {
        Some((v, p)) => (Some(v), Some(p)),
        None => (None, None),
    };
    let mut routes = Vec::new();
    if let Some(plan) = &plan {
        for r in plan.routes() {
            let recourse = verifier.recourse(r)?;
            routes.push(RouteReport { route: r.clone(), cost: r.cost(&prep.inst), recourse });
        }
    }

    let mut cuts: Vec<LinearCut> = Vec::new();
    if let Some(p1) = &phase1 {
        cuts.extend(p1.sri_cuts.iter().map(|c| c.to_cut(&prep.inst)));
    }
    cuts.extend(root.cuts.iter().cloned());
    cuts.extend(verifier.cuts.iter().cloned());
    let mut cut_counts = BTreeMap::new();
    for c in &cuts {
        *cut_counts.entry(c.kind).or_insert(0) += 1;
    }
    Ok(SolveReport {
        status,
        value,
        bound,
        phase1_value: phase1.as_ref().map(|p| p.value + base),
        root_bound,
        base_cost: prep.base_cost.clone(),
        plan,
        routes,
        cut_counts,
        outer_iterations: lazy.iterations,
        phase1_rounds: phase1.as_ref().map_or(0, |p| p.rounds),
        root_rounds: root.rounds,
        phase1_time,
        root_time,
        total_time: started.elapsed(),
        cuts,
        model,
    })
}
