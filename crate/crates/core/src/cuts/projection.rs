//! Projection of `(x, y)` inequalities onto `(x, θ)` using
//! `θ_v ≥ Σ_ξ p_ξ w_v y^ξ_v`.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use super::cut::{AffineForm, CutKind, LinearCut};
use super::CutError;
use crate::model::Instance;
use crate::rational::{int, positive_part, Rat};
use crate::recourse::RecourseWeights;

/// `Σ_v φ_v θ_v ≥ (x-linear part) + ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedSriCut {
    pub theta: BTreeMap<usize, Rat>,
    pub rhs: AffineForm,
}

impl ProjectedSriCut {
    pub fn to_cut(&self, kind: CutKind) -> LinearCut {
        let mut support: Vec<usize> = self.theta.keys().copied().collect();
        for e in self.rhs.x.keys() {
            for v in [e.u, e.v] {
                if v != 0 && !support.contains(&v) {
                    support.push(v);
                }
            }
        }
        support.sort_unstable();
        let mut cut = LinearCut::new(kind, support);
        cut.theta = self.theta.iter().filter(|(_, c)| !c.is_zero()).map(|(v, c)| (*v, c.clone())).collect();
        cut.x = self.rhs.x.iter().map(|(e, c)| (*e, -c)).collect();
        cut.rhs = self.rhs.constant.clone();
        cut
    }

    /// Right-hand side at `x`.
    pub fn rhs_at(&self, x: &[f64]) -> f64 {
        self.rhs.eval(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    /// The projection is the whole nonnegative orthant: no cut.
    Trivial,
    Cut(ProjectedSriCut),
}

impl Projection {
    pub fn cut(self) -> Option<ProjectedSriCut> {
        match self {
            Projection::Trivial => None,
            Projection::Cut(c) => Some(c),
        }
    }
}

/// Projects `Σ_ξ (a^ξ)ᵀ y^ξ ≥ h(x)`: `φ_v = (max_ξ a^ξ_v / (p_ξ w_v))^+`.
///
/// `a` is keyed by `(scenario, customer)`. A positive coefficient on a
/// customer/scenario with `p_ξ w_v = 0` makes the projection trivial.
pub fn project_inequality(
    a: &BTreeMap<(usize, usize), Rat>,
    h: AffineForm,
    weights: &RecourseWeights,
    probabilities: &[Rat],
) -> Result<Projection, CutError> {
    if probabilities.iter().any(|p| p.is_negative()) {
        return Err(CutError::NegativeProbability);
    }
    let mut theta: BTreeMap<usize, Rat> = BTreeMap::new();
    for (&(s, v), coef) in a {
        if !coef.is_positive() {
            theta.entry(v).or_insert_with(Rat::zero);
            continue;
        }
        let scale = &probabilities[s] * weights.w(v);
        if scale.is_zero() {
            return Ok(Projection::Trivial);
        }
        let ratio = coef / scale;
        let entry = theta.entry(v).or_insert_with(Rat::zero);
        if ratio > *entry {
            *entry = ratio;
        }
    }
    for c in theta.values_mut() {
        *c = positive_part(c.clone());
    }
    Ok(Projection::Cut(ProjectedSriCut { theta, rhs: h }))
}

/// Nonnegative multipliers `α^ξ_S` on scenario recourse inequalities and
/// nonpositive multipliers `β^ξ_v` on `y^ξ_v ≤ b_v`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DualCertificate {
    pub alpha: BTreeMap<(usize, Vec<usize>), Rat>,
    pub beta: BTreeMap<(usize, usize), Rat>,
}

impl DualCertificate {
    pub fn add_alpha(&mut self, scenario: usize, set: &[usize], value: Rat) {
        if value.is_zero() {
            return;
        }
        let mut key = set.to_vec();
        key.sort_unstable();
        *self.alpha.entry((scenario, key)).or_insert_with(Rat::zero) += value;
    }

    pub fn add_beta(&mut self, scenario: usize, v: usize, value: Rat) {
        if value.is_zero() {
            return;
        }
        *self.beta.entry((scenario, v)).or_insert_with(Rat::zero) += value;
    }

    pub fn check_signs(&self) -> Result<(), CutError> {
        if self.alpha.values().any(|a| a.is_negative()) || self.beta.values().any(|b| b.is_positive()) {
            return Err(CutError::DualSign);
        }
        Ok(())
    }

    /// Coefficient of `y^ξ_v` in the combined inequality: `β^ξ_v + Σ_{S∋v} α^ξ_S`.
    pub fn y_coefficients(&self) -> BTreeMap<(usize, usize), Rat> {
        let mut a: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for ((s, set), alpha) in &self.alpha {
            for &v in set {
                *a.entry((*s, v)).or_insert_with(Rat::zero) += alpha;
            }
        }
        for (&(s, v), beta) in &self.beta {
            *a.entry((s, v)).or_insert_with(Rat::zero) += beta;
        }
        a
    }

    /// Right-hand side `Σ α^ξ_S x(E(S)) + ν` with
    /// `ν = Σ α^ξ_S (k_ξ(S) − |S|) + Σ β^ξ_v b_v`.
    pub fn rhs(&self, inst: &Instance, weights: &RecourseWeights) -> AffineForm {
        let mut form = AffineForm::default();
        for ((s, set), alpha) in &self.alpha {
            form.add_inner(set, alpha);
            form.constant += alpha * int(inst.scenario_vehicles(*s, set) - set.len() as i64);
        }
        for (&(_, v), beta) in &self.beta {
            form.constant += beta * int(weights.b(v));
        }
        form
    }

    /// Projected SRI of the conic combination.
    pub fn project(&self, inst: &Instance, weights: &RecourseWeights) -> Result<Projection, CutError> {
        self.check_signs()?;
        project_inequality(&self.y_coefficients(), self.rhs(inst, weights), weights, inst.probabilities())
    }
}

/// `Σ_{v∈S} max_{ξ∈Ξ} (p_ξ w_v)^{-1} θ_v ≥ |Ξ|(x(E(S)) − |S|) + Σ_{ξ∈Ξ} k_ξ(S)`.
pub fn projected_aggregated_sri(
    inst: &Instance,
    set: &[usize],
    scenarios: &[usize],
    weights: &RecourseWeights,
) -> Result<ProjectedSriCut, CutError> {
    if scenarios.is_empty() {
        return Err(CutError::EmptyScenarioSet);
    }
    if set.is_empty() {
        return Err(CutError::EmptySet);
    }
    let mut theta = BTreeMap::new();
    for &v in set {
        if weights.w(v).is_zero() {
            return Err(CutError::ZeroWeight(v));
        }
        let mut best = Rat::zero();
        for &s in scenarios {
            let p = inst.probability(s);
            if p.is_zero() {
                return Err(CutError::ZeroWeight(v));
            }
            let c = (p * weights.w(v)).recip();
            if c > best {
                best = c;
            }
        }
        theta.insert(v, best);
    }
    let m = scenarios.len() as i64;
    let mut rhs = AffineForm::constant(int(
        scenarios.iter().map(|&s| inst.scenario_vehicles(s, set)).sum::<i64>() - m * set.len() as i64,
    ));
    rhs.add_inner(set, &int(m));
    Ok(ProjectedSriCut { theta, rhs })
}
