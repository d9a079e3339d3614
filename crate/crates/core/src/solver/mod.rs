//! Exact branch-and-cut: a high-dimensional root LP over scenario recourse
//! actions, its projection onto `(x, θ)`, and a lazy MIP loop that certifies
//! the recourse cost of every integer candidate.

mod columns;
mod lagrangian;
mod phase1;
mod report;
mod root;
mod verifier;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use thiserror::Error;

pub use lagrangian::lagrangian_bound;
pub use phase1::{solve_root_phase1, DualBundle, Phase1};
pub use report::{RouteReport, SolveReport, Status};
pub use root::{build_root_relaxation, RootRelaxation};
pub use verifier::solve;

use crate::cuts::CutError;
use crate::lp::LpError;
use crate::model::{FirstStage, Instance, ModelError};
use crate::rational::{ceil_rat, Rat};
use crate::recourse::{RecourseError, RecourseKind, RecourseWeights, WeightScheme};
use crate::separation::SeparationError;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("instance is infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Separation(#[from] SeparationError),
    #[error(transparent)]
    Recourse(#[from] RecourseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Integer L-shaped cuts only.
    #[default]
    Ils,
    /// Projected SRIs with scenario-optimal recourse.
    Sri,
    /// Projected SRIs as bounds for classical recourse.
    IlsPlusSri,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Ils => "ils",
            Mode::Sri => "sri",
            Mode::IlsPlusSri => "ils+sri",
        }
    }

    pub fn uses_sri(self) -> bool {
        self != Mode::Ils
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Mode {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, SolverError> {
        match s {
            "ils" => Ok(Mode::Ils),
            "sri" => Ok(Mode::Sri),
            "ils+sri" => Ok(Mode::IlsPlusSri),
            _ => Err(SolverError::Config(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub first_stage: FirstStage,
    pub recourse: RecourseKind,
    pub mode: Mode,
    pub time_limit: Duration,
    pub phase1_limit: Duration,
    pub weights: WeightScheme,
    pub bound: i64,
    pub seed: u64,
    /// Cap on fractional separation rounds at the root.
    pub root_rounds: usize,
    /// Per-scenario limit for the MIP-based SRI separation.
    pub milp_limit: Duration,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            first_stage: FirstStage::Cvrp,
            recourse: RecourseKind::ScenarioOptimal,
            mode: Mode::Ils,
            time_limit: Duration::from_secs(1800),
            phase1_limit: Duration::from_secs(60),
            weights: WeightScheme::Classical,
            bound: 1,
            seed: 0,
            root_rounds: 50,
            milp_limit: Duration::from_secs(30),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        match (self.mode, self.recourse) {
            (Mode::Sri, RecourseKind::Classical) => {
                return Err(SolverError::Config("mode sri requires scenario-optimal recourse".into()))
            }
            (Mode::IlsPlusSri, RecourseKind::ScenarioOptimal) => {
                return Err(SolverError::Config("mode ils+sri requires classical recourse".into()))
            }
            _ => {}
        }
        if self.bound < 1 {
            return Err(SolverError::Config("recourse bound b must be at least 1".into()));
        }
        if self.recourse == RecourseKind::Classical && (self.bound != 1 || self.weights != WeightScheme::Classical) {
            return Err(SolverError::Config("classical recourse fixes w = 2c_0v and b = 1".into()));
        }
        Ok(())
    }
}

/// Preprocessed instance plus everything derived from the configuration.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub inst: Instance,
    pub base_cost: Rat,
    pub weights: RecourseWeights,
    pub classical_weights: RecourseWeights,
    pub fleet: Option<usize>,
    pub scenario_order: Vec<usize>,
}

impl Prepared {
    pub fn new(inst: &Instance, cfg: &SolverConfig) -> Result<Self, SolverError> {
        cfg.validate()?;
        let (inst, base_cost) = crate::model::preprocess_large_demands(inst);
        let classical_weights = RecourseWeights::classical(&inst);
        let weights = match cfg.recourse {
            RecourseKind::Classical => classical_weights.clone(),
            RecourseKind::ScenarioOptimal => RecourseWeights::for_instance(&inst, cfg.weights, cfg.bound),
        };
        let fleet = match cfg.first_stage {
            FirstStage::Cvrp => {
                let k = inst.require_fleet_size()?;
                let n = inst.n_customers();
                let total: Rat = inst.customers().map(|v| inst.expected_demand(v)).sum();
                let need = ceil_rat(&(total / Rat::from_integer(inst.capacity().into())));
                if (k as i64) < need || k > n {
                    return Err(SolverError::Infeasible(format!(
                        "fleet size {k} outside [{need}, {n}] for the expected demand"
                    )));
                }
                Some(k)
            }
            FirstStage::Subtour => None,
        };
        let scenario_order = inst.scenarios_by_total_demand();
        Ok(Prepared { inst, base_cost, weights, classical_weights, fleet, scenario_order })
    }

    /// `k'` for a capacity set: `k̄(S)` (at least 1) under the CVRP set, 1 otherwise.
    pub fn k_prime(&self, set: &[usize]) -> i64 {
        match self.fleet {
            Some(_) => self.inst.expected_vehicles(set).max(1),
            None => 1,
        }
    }
}
