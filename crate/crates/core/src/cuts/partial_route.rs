use num::{Signed, Zero};

use super::activation::activation_wof;
use super::cut::{CutKind, LinearCut};
use super::projection::{DualCertificate, Projection, ProjectedSriCut};
use super::CutError;
use crate::model::{Instance, PartialRoute};
use crate::rational::{clean_float, int, positive_part, Rat};
use crate::recourse::{solve_covering_lp, RecourseWeights, RowSelection};

/// Cleaned optimal dual of the partial-route LP for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialRouteDual {
    pub lower: Rat,
    /// `(V+(H'), k_ξ(H'), α_{H'})` with `α > 0`.
    pub alpha: Vec<(Vec<usize>, i64, Rat)>,
    /// `(v, β_v)` with `β_v < 0`.
    pub beta: Vec<(usize, Rat)>,
}

impl PartialRouteDual {
    pub fn objective(&self, weights: &RecourseWeights) -> Rat {
        let a: Rat = self.alpha.iter().map(|(_, k, a)| a * int(k - 1)).sum();
        let b: Rat = self.beta.iter().map(|(v, b)| b * int(weights.b(*v))).sum();
        a + b
    }

    pub fn alpha_total(&self) -> Rat {
        self.alpha.iter().map(|(_, _, a)| a.clone()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialRouteBundle {
    pub route: PartialRoute,
    pub lower: Rat,
    pub per_scenario: Vec<PartialRouteDual>,
    /// `θ(V+(H)) ≥ L*(H)·W_OF(x; H)`.
    pub ils: LinearCut,
    pub dominating: Option<ProjectedSriCut>,
    pub certificate: DualCertificate,
}

/// Lower bound `L*(H) = Σ_ξ p_ξ L*_ξ(H)` from the partial-route LP over the
/// minimal sub-partial-routes, the partial-route cut and its dominating
/// projected SRI.
pub fn partial_route_bundle(
    inst: &Instance,
    h: &PartialRoute,
    weights: &RecourseWeights,
) -> Result<PartialRouteBundle, CutError> {
    let blocks = h.sets();
    let customers = h.customers();
    let mut per_scenario = Vec::with_capacity(inst.n_scenarios());
    let mut certificate = DualCertificate::default();
    let mut lower = Rat::zero();
    for s in 0..inst.n_scenarios() {
        let sol = solve_covering_lp(blocks, inst.scenario_demands(s), inst.capacity(), weights, RowSelection::Minimal)?;
        let mut rows: Vec<(Vec<usize>, i64, Rat)> = sol
            .rows
            .iter()
            .zip(sol.duals.iter().chain(std::iter::repeat(&0.0)))
            .map(|(r, &d)| {
                let set: Vec<usize> = blocks[r.first..=r.last].iter().flatten().copied().collect();
                (set, r.rhs + 1, positive_part(clean_float(d)))
            })
            .collect();
        let mut beta: Vec<(usize, Rat)> = customers
            .iter()
            .map(|&v| {
                let used: Rat = rows.iter().filter(|(set, _, _)| set.contains(&v)).map(|(_, _, a)| a.clone()).sum();
                (v, (weights.w(v) - used).min(Rat::zero()))
            })
            .collect();
        shrink_support(&mut rows, &mut beta, weights);
        rows.retain(|(_, _, a)| a.is_positive());
        beta.retain(|(_, b)| b.is_negative());
        let p = inst.probability(s);
        for (set, _, a) in &rows {
            certificate.add_alpha(s, set, p * a);
        }
        for (v, b) in &beta {
            certificate.add_beta(s, *v, p * b);
        }
        lower += p * &sol.value;
        per_scenario.push(PartialRouteDual { lower: sol.value, alpha: rows, beta });
    }
    let ils = LinearCut::theta_bound(CutKind::PartialRouteCut, &customers, &lower, &activation_wof(h));
    let dominating = match certificate.project(inst, weights)? {
        Projection::Cut(c) => Some(c),
        Projection::Trivial => None,
    };
    Ok(PartialRouteBundle { route: h.clone(), lower, per_scenario, ils, dominating, certificate })
}

/// Moves weight from a row `H'` onto the negative bound duals inside it while
/// `k(H') − b(V+(H') ∩ {β < 0}) ≤ 1`; the objective is unchanged and the
/// support shrinks at every step.
fn shrink_support(rows: &mut [(Vec<usize>, i64, Rat)], beta: &mut [(usize, Rat)], weights: &RecourseWeights) {
    loop {
        let negative: Vec<usize> = beta.iter().filter(|(_, b)| b.is_negative()).map(|(v, _)| *v).collect();
        let pick = rows.iter().position(|(set, k, a)| {
            a.is_positive() && k - set.iter().filter(|v| negative.contains(v)).map(|&v| weights.b(v)).sum::<i64>() <= 1
        });
        let Some(i) = pick else { break };
        let inside: Vec<usize> = rows[i].0.iter().copied().filter(|v| negative.contains(v)).collect();
        let mut eps = rows[i].2.clone();
        for (v, b) in beta.iter() {
            if inside.contains(v) && -b < eps {
                eps = -b;
            }
        }
        rows[i].2 -= &eps;
        for (v, b) in beta.iter_mut() {
            if inside.contains(v) {
                *b += &eps;
            }
        }
    }
}
