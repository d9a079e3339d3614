use num::Zero;

use super::activation::activation_wdl;
use super::cut::{CutKind, LinearCut};
use super::projection::{DualCertificate, Projection};
use super::CutError;
use crate::model::Instance;
use crate::rational::{int, Rat};
use crate::recourse::RecourseWeights;

/// Closed-form optimal dual of the per-scenario set LP.
#[derive(Debug, Clone, PartialEq)]
pub struct SetDual {
    pub lower: Rat,
    pub alpha: Rat,
    /// `(customer, β̄_v)` for the customers taken before the pivot.
    pub beta: Vec<(usize, Rat)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetCutBundle {
    pub set: Vec<usize>,
    pub k_prime: i64,
    pub lower: Rat,
    pub per_scenario: Vec<SetDual>,
    /// `θ(S) ≥ L*·(1 + x(E(S)) − |S| + k')`.
    pub ils: LinearCut,
    /// Projected SRI from `(p_ξ ᾱ^ξ, p_ξ β̄^ξ)`; `None` when the projection is trivial.
    pub dominating: Option<super::ProjectedSriCut>,
    pub certificate: DualCertificate,
}

/// Greedy bound for `min Σ w_v y_v : y(S) ≥ k_ξ(S) − k', 0 ≤ y ≤ b` per scenario,
/// its dual certificate, the set cut and the projected SRI that dominates it.
pub fn set_cut_bundle(
    inst: &Instance,
    set: &[usize],
    k_prime: i64,
    weights: &RecourseWeights,
) -> Result<SetCutBundle, CutError> {
    if set.is_empty() {
        return Err(CutError::EmptySet);
    }
    let mut order: Vec<usize> = set.to_vec();
    order.sort_by(|&a, &b| weights.w(a).cmp(weights.w(b)).then(a.cmp(&b)));
    let mut per_scenario = Vec::with_capacity(inst.n_scenarios());
    let mut certificate = DualCertificate::default();
    let mut lower = Rat::zero();
    for s in 0..inst.n_scenarios() {
        let need = inst.scenario_vehicles(s, set) - k_prime;
        if need <= 0 {
            per_scenario.push(SetDual { lower: Rat::zero(), alpha: Rat::zero(), beta: vec![] });
            continue;
        }
        let mut taken = 0i64;
        let mut partial = Rat::zero();
        let mut pivot = None;
        for (i, &v) in order.iter().enumerate() {
            if need <= taken + weights.b(v) {
                pivot = Some(i);
                break;
            }
            taken += weights.b(v);
            partial += weights.w(v) * int(weights.b(v));
        }
        let j = pivot.ok_or(CutError::InfeasibleBound { set: set.to_vec(), scenario: s })?;
        let wj = weights.w(order[j]).clone();
        let value = partial + &wj * int(need - taken);
        let beta: Vec<(usize, Rat)> = order[..j].iter().map(|&v| (v, weights.w(v) - &wj)).collect();
        let p = inst.probability(s);
        certificate.add_alpha(s, set, p * &wj);
        for (v, b) in &beta {
            certificate.add_beta(s, *v, p * b);
        }
        lower += p * &value;
        per_scenario.push(SetDual { lower: value, alpha: wj, beta });
    }
    let ils = LinearCut::theta_bound(CutKind::SetCut, set, &lower, &activation_wdl(set, k_prime));
    let dominating = match certificate.project(inst, weights)? {
        Projection::Cut(c) => Some(c),
        Projection::Trivial => None,
    };
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    Ok(SetCutBundle { set: sorted, k_prime, lower, per_scenario, ils, dominating, certificate })
}
