//! Cut algebra: scenario recourse inequalities, their projections onto
//! `(x, θ)`, set cuts, partial-route cuts and activation functions.

mod activation;
mod cut;
mod partial_route;
mod projection;
mod set_cut;
mod sri;

use thiserror::Error;

pub use activation::{activation_path, activation_route, activation_wdl, activation_wof};
pub use cut::{AffineForm, CutKind, LinearCut, Point};
pub use partial_route::{partial_route_bundle, PartialRouteBundle, PartialRouteDual};
pub use projection::{project_inequality, projected_aggregated_sri, DualCertificate, Projection, ProjectedSriCut};
pub use set_cut::{set_cut_bundle, SetCutBundle, SetDual};
pub use sri::{aggregate_sri, sri_violation, AggregatedSriCut, SriCut, VIOLATION_TOL};

use crate::recourse::RecourseError;

#[derive(Debug, Error, PartialEq)]
pub enum CutError {
    #[error("customer set is empty")]
    EmptySet,
    #[error("scenario set is empty")]
    EmptyScenarioSet,
    #[error("probability is negative")]
    NegativeProbability,
    #[error("customer {0} has zero recourse weight")]
    ZeroWeight(usize),
    #[error("set {set:?} needs more unloads than the bounds allow in scenario {scenario}")]
    InfeasibleBound { set: Vec<usize>, scenario: usize },
    #[error("dual multipliers have the wrong sign")]
    DualSign,
    #[error("cut line: {0}")]
    Parse(String),
    #[error(transparent)]
    Recourse(#[from] RecourseError),
}
