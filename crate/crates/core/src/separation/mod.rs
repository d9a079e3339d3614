//! Violated-cut discovery: capacity sets, scenario recourse inequalities,
//! partial routes and the round that ties them together.

mod capacity;
mod partial_routes;
mod round;
mod sri;

use thiserror::Error;

pub use capacity::{capacity_violation, separate_capacity_sets, separate_rci, support_components, MAX_SETS};
pub use partial_routes::{extract_partial_routes, STRONG_EDGE, WEAK_EDGE};
pub use round::{separation_round, SeparationContext};
pub use sri::{separate_sri_heuristic, separate_sri_milp, MILP_EPSILON, MILP_THRESHOLD};

use crate::cuts::CutError;
use crate::lp::LpError;

#[derive(Debug, Error)]
pub enum SeparationError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Cut(#[from] CutError),
}
