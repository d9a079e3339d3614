use super::cut::{AffineForm, CutKind, LinearCut};
use super::CutError;
use crate::model::{inner_sum, Instance};
use crate::rational::int;

pub const VIOLATION_TOL: f64 = 1e-4;

/// `y^ξ(S) ≥ k_ξ(S) + x(E(S)) − |S|` for one scenario.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SriCut {
    pub set: Vec<usize>,
    pub scenario: usize,
}

/// Sum of the scenario recourse inequalities of `set` over `scenarios`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AggregatedSriCut {
    pub set: Vec<usize>,
    pub scenarios: Vec<usize>,
}

impl SriCut {
    pub fn to_cut(&self, inst: &Instance) -> LinearCut {
        AggregatedSriCut { set: self.set.clone(), scenarios: vec![self.scenario] }.to_cut(inst)
    }
}

impl AggregatedSriCut {
    /// Row form `Σ_{ξ∈Ξ} y^ξ(S) − |Ξ| x(E(S)) ≥ Σ_{ξ∈Ξ} k_ξ(S) − |Ξ||S|`.
    pub fn to_cut(&self, inst: &Instance) -> LinearCut {
        let kind = if self.scenarios.len() == 1 { CutKind::Sri } else { CutKind::AggregatedSri };
        let mut cut = LinearCut::new(kind, self.set.clone());
        let m = self.scenarios.len() as i64;
        for &s in &self.scenarios {
            for &v in &self.set {
                cut.y.insert((s, v), int(1));
            }
        }
        let mut form = AffineForm::default();
        form.add_inner(&self.set, &int(-m));
        cut.x = form.x;
        let k: i64 = self.scenarios.iter().map(|&s| inst.scenario_vehicles(s, &self.set)).sum();
        cut.rhs = int(k - m * self.set.len() as i64);
        cut
    }
}

/// `(k_ξ(S) + x̄(E(S)) − |S|) − ȳ^ξ(S)`; positive when violated.
///
/// `y` is indexed `[scenario][vertex]`.
pub fn sri_violation(inst: &Instance, x: &[f64], y: &[Vec<f64>], set: &[usize], scenario: usize) -> Result<f64, CutError> {
    if set.is_empty() {
        return Err(CutError::EmptySet);
    }
    let k = inst.scenario_vehicles(scenario, set) as f64;
    let covered: f64 = set.iter().map(|&v| y[scenario][v]).sum();
    Ok(k + inner_sum(x, set) - set.len() as f64 - covered)
}

/// Scenarios whose SRI on `set` is violated by more than `tol`, aggregated.
pub fn aggregate_sri(
    inst: &Instance,
    x: &[f64],
    y: &[Vec<f64>],
    set: &[usize],
    tol: f64,
) -> Result<Option<AggregatedSriCut>, CutError> {
    let mut scenarios = Vec::new();
    for s in 0..inst.n_scenarios() {
        if sri_violation(inst, x, y, set, s)? > tol {
            scenarios.push(s);
        }
    }
    let mut set = set.to_vec();
    set.sort_unstable();
    Ok((!scenarios.is_empty()).then_some(AggregatedSriCut { set, scenarios }))
}
