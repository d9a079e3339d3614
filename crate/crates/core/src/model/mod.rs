//! Instances, preprocessing and first-stage structures.

mod edges;
mod format;
mod instance;
mod route;

pub use edges::{all_edges, cross_sum, edge_count, edge_index, inner_edges, inner_sum, Edge};
pub use format::{parse_instance, rounded_euclidean, write_instance};
pub use instance::{min_vehicles, preprocess_large_demands, Instance, ModelError};
pub use route::{adheres, routes_of, Direction, PartialRoute, Route, RoutingPlan};

/// First-stage feasible set: degree and subtour constraints, optionally with
/// the fleet size and rounded capacity inequalities on expected demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FirstStage {
    #[default]
    Cvrp,
    Subtour,
}
