use super::capacity::separate_capacity_sets;
use super::partial_routes::extract_partial_routes;
use super::SeparationError;
use crate::cuts::{
    activation_wof, partial_route_bundle, projected_aggregated_sri, set_cut_bundle, CutKind, LinearCut, Point,
    VIOLATION_TOL,
};
use crate::model::{inner_sum, FirstStage, Instance, PartialRoute};
use crate::recourse::{RecourseKind, RecourseWeights};

/// Candidate point and mode flags for one separation round.
#[derive(Debug, Clone)]
pub struct SeparationContext<'a> {
    pub inst: &'a Instance,
    pub x: &'a [f64],
    /// Vertex-indexed; entry 0 unused.
    pub theta: &'a [f64],
    pub y: Option<&'a [Vec<f64>]>,
    pub use_sri: bool,
    pub recourse: RecourseKind,
    pub first_stage: FirstStage,
    pub weights: &'a RecourseWeights,
    /// Weights of the classical bound `w_v = 2 c_{0v}`, `b = 1`.
    pub classical_weights: &'a RecourseWeights,
    pub scenario_order: Vec<usize>,
}

impl<'a> SeparationContext<'a> {
    fn point(&self) -> Point<'a> {
        Point { x: self.x, theta: self.theta, y: self.y }
    }

    fn k_prime(&self, set: &[usize]) -> i64 {
        match self.first_stage {
            FirstStage::Cvrp => self.inst.expected_vehicles(set).max(1),
            FirstStage::Subtour => 1,
        }
    }

    fn push_if_violated(&self, cut: LinearCut, out: &mut Vec<LinearCut>) -> bool {
        let violated = cut.violation(self.point()) >= VIOLATION_TOL;
        if violated && !out.contains(&cut) {
            out.push(cut);
        }
        violated
    }

    /// Set cut or projected aggregated SRI on `set`.
    fn set_cut(&self, set: &[usize], k_prime: i64, out: &mut Vec<LinearCut>) -> Result<bool, SeparationError> {
        if self.use_sri {
            if set.iter().any(|&v| self.weights.w(v) == &num::Zero::zero()) {
                return Ok(false);
            }
            let base = inner_sum(self.x, set) - set.len() as f64;
            let kbar = self.inst.expected_vehicles(set);
            let scenarios: Vec<usize> = (0..self.inst.n_scenarios())
                .filter(|&s| {
                    let k = self.inst.scenario_vehicles(s, set);
                    k as f64 + base > VIOLATION_TOL && (self.first_stage == FirstStage::Subtour || k > kbar)
                })
                .collect();
            if scenarios.is_empty() {
                return Ok(false);
            }
            let cut = projected_aggregated_sri(self.inst, set, &scenarios, self.weights)?;
            Ok(self.push_if_violated(cut.to_cut(CutKind::ProjectedAggregatedSri), out))
        } else {
            let bundle = match set_cut_bundle(self.inst, set, k_prime, self.weights) {
                Ok(b) => b,
                Err(crate::cuts::CutError::InfeasibleBound { .. }) => return Ok(false),
                Err(e) => return Err(e.into()),
            };
            Ok(self.push_if_violated(bundle.ils, out))
        }
    }

    fn partial_route_cut(&self, h: &PartialRoute, out: &mut Vec<LinearCut>) -> Result<bool, SeparationError> {
        let bundle = match partial_route_bundle(self.inst, h, self.weights) {
            Ok(b) => b,
            Err(crate::cuts::CutError::Recourse(_)) => return Ok(false),
            Err(e) => return Err(e.into()),
        };
        if self.use_sri {
            match bundle.dominating {
                Some(cut) => Ok(self.push_if_violated(cut.to_cut(CutKind::ProjectedSri), out)),
                None => Ok(false),
            }
        } else {
            Ok(self.push_if_violated(bundle.ils, out))
        }
    }

    fn classical_bound_cut(&self, h: &PartialRoute, out: &mut Vec<LinearCut>) -> Result<bool, SeparationError> {
        let bundle = match partial_route_bundle(self.inst, h, self.classical_weights) {
            Ok(b) => b,
            Err(crate::cuts::CutError::Recourse(_)) => return Ok(false),
            Err(e) => return Err(e.into()),
        };
        let cut = LinearCut::theta_bound(CutKind::PartialRouteCut, &h.customers(), &bundle.lower, &activation_wof(h));
        Ok(self.push_if_violated(cut, out))
    }
}

/// One round of cut separation at the context's candidate.
///
/// First pass: capacity (or subtour) sets, each followed by a set cut or a
/// projected aggregated SRI; stops there if any violated cut was emitted.
/// Second pass: per extracted partial route, a set cut on its customers, then
/// a partial-route cut, then (classical recourse) the classical bound cut.
pub fn separation_round(ctx: &SeparationContext<'_>) -> Result<Vec<LinearCut>, SeparationError> {
    let mut out = Vec::new();
    let n = ctx.inst.n_customers();
    let vehicles = |s: &[usize]| ctx.k_prime(s);
    let kind = match ctx.first_stage {
        FirstStage::Cvrp => CutKind::Rci,
        FirstStage::Subtour => CutKind::Sec,
    };
    for (set, _) in separate_capacity_sets(ctx.x, n, &vehicles, VIOLATION_TOL) {
        let k_prime = ctx.k_prime(&set);
        ctx.push_if_violated(LinearCut::capacity(kind, &set, k_prime), &mut out);
        ctx.set_cut(&set, k_prime, &mut out)?;
    }
    if !out.is_empty() {
        return Ok(sorted(out));
    }
    for h in extract_partial_routes(ctx.x, n) {
        let customers = h.customers();
        if ctx.set_cut(&customers, ctx.k_prime(&customers), &mut out)? {
            continue;
        }
        if ctx.partial_route_cut(&h, &mut out)? {
            continue;
        }
        if ctx.recourse == RecourseKind::Classical {
            ctx.classical_bound_cut(&h, &mut out)?;
        }
    }
    Ok(sorted(out))
}

fn sorted(mut cuts: Vec<LinearCut>) -> Vec<LinearCut> {
    cuts.sort_by(|a, b| a.kind.cmp(&b.kind).then_with(|| a.support.cmp(&b.support)));
    cuts
}
