//! Second-stage recourse: the classical detour policy, recourse-action
//! membership and the scenario-optimal recourse LP.

mod classical;
mod membership;
mod optimal;

use std::collections::BTreeMap;

use num::{Signed, Zero};
use thiserror::Error;

use crate::lp::LpError;
use crate::model::{Instance, ModelError};
use crate::rational::{int, positive_part, Rat};

pub use classical::{classical_formula_counts, classical_policy, classical_recourse, simulate_classical};
pub use membership::is_recourse_action;
pub use optimal::{
    covering_rows, scenario_optimal_recourse, scenario_optimal_value, solve_covering_lp, CoveringRow,
    CoveringSolution, RowSelection, ScenarioOptimal,
};

#[derive(Debug, Error, PartialEq)]
pub enum RecourseError {
    #[error("demand {demand} of customer {customer} exceeds the capacity {capacity}")]
    DemandAboveCapacity { customer: usize, demand: i64, capacity: i64 },
    #[error("recourse vector has a negative entry")]
    NegativeEntry,
    #[error("no recourse action within the bounds b")]
    Infeasible,
    #[error("LP vertex is not integral")]
    NonIntegralVertex,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RecourseKind {
    /// Return trip at each capacity-crossing customer in the cheaper orientation.
    Classical,
    /// Cheapest weighted recourse action per scenario.
    #[default]
    ScenarioOptimal,
}

/// Linear lower bound `Σ w_v y_v` on the recourse cost with `y ≤ b`.
///
/// Vectors are indexed by vertex; slot 0 is unused.
#[derive(Debug, Clone, PartialEq)]
pub struct RecourseWeights {
    w: Vec<Rat>,
    b: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightScheme {
    /// `w_v = 2 c_{0v}`.
    #[default]
    Classical,
    /// `w_v = (min_{u≠v} {2c_{0v}, c_{0u} + c_{0v} − c_{uv}})^+`.
    Preventive,
}

impl RecourseWeights {
    pub fn new(w: Vec<Rat>, b: Vec<i64>) -> Result<Self, RecourseError> {
        if w.len() != b.len() || w.iter().any(|x| x.is_negative()) || b.iter().any(|&x| x < 0) {
            return Err(RecourseError::NegativeEntry);
        }
        Ok(RecourseWeights { w, b })
    }

    pub fn for_instance(inst: &Instance, scheme: WeightScheme, bound: i64) -> Self {
        let n = inst.n_customers();
        let mut w = vec![Rat::zero(); n + 1];
        for v in 1..=n {
            let direct = 2 * inst.cost(0, v);
            w[v] = match scheme {
                WeightScheme::Classical => int(direct),
                WeightScheme::Preventive => {
                    let best = (1..=n)
                        .filter(|&u| u != v)
                        .map(|u| inst.cost(0, u) + inst.cost(0, v) - inst.cost(u, v))
                        .fold(direct, i64::min);
                    positive_part(int(best))
                }
            };
        }
        let mut b = vec![bound; n + 1];
        b[0] = 0;
        RecourseWeights { w, b }
    }

    pub fn classical(inst: &Instance) -> Self {
        Self::for_instance(inst, WeightScheme::Classical, 1)
    }

    pub fn w(&self, v: usize) -> &Rat {
        &self.w[v]
    }

    pub fn b(&self, v: usize) -> i64 {
        self.b[v]
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

/// Per-customer split of a route's recourse cost.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RecourseBreakdown {
    pub total: Rat,
    pub per_customer: BTreeMap<usize, Rat>,
}

impl RecourseBreakdown {
    pub fn from_parts(parts: impl IntoIterator<Item = (usize, Rat)>) -> Self {
        let mut out = RecourseBreakdown::default();
        for (v, q) in parts {
            out.total += &q;
            *out.per_customer.entry(v).or_insert_with(Rat::zero) += q;
        }
        out
    }

    pub fn get(&self, v: usize) -> Rat {
        self.per_customer.get(&v).cloned().unwrap_or_else(Rat::zero)
    }
}

/// Unload-trip counts `y[ξ][v]` per scenario and customer.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoursePolicy {
    pub y: Vec<Vec<i64>>,
    pub bound: Vec<i64>,
}

impl RecoursePolicy {
    pub fn zeros(n_scenarios: usize, n_customers: usize, bound: Vec<i64>) -> Self {
        RecoursePolicy { y: vec![vec![0; n_customers + 1]; n_scenarios], bound }
    }

    pub fn scenario(&self, xi: usize) -> &[i64] {
        &self.y[xi]
    }
}

pub(crate) fn check_capacity(inst: &Instance, customers: &[usize]) -> Result<(), RecourseError> {
    for s in 0..inst.n_scenarios() {
        for &v in customers {
            let d = inst.demand(s, v);
            if d > inst.capacity() {
                return Err(RecourseError::DemandAboveCapacity { customer: v, demand: d, capacity: inst.capacity() });
            }
        }
    }
    Ok(())
}
