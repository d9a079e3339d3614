//! Exact two-stage solver for the vehicle routing problem with stochastic
//! demands given by finitely many scenarios.

pub mod cuts;
pub mod generate;
pub mod lp;
pub mod model;
pub mod oracles;
pub mod rational;
pub mod recourse;
pub mod separation;
pub mod solver;
pub mod verify;

pub use model::{FirstStage, Instance, PartialRoute, Route, RoutingPlan};
pub use rational::Rat;
pub use recourse::{RecourseKind, RecourseWeights, WeightScheme};
