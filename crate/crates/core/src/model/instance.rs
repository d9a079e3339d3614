use num::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{ceil_div, ceil_rat, int, Rat};

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("instance file: {0}")]
    Schema(String),
    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitySum(String),
    #[error("negative {what} at {at}")]
    Negative { what: &'static str, at: String },
    #[error("cost matrix is not symmetric with zero diagonal at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("first-stage set requires a fleet size but the instance has none")]
    MissingFleetSize,
    #[error("customer set is empty")]
    EmptySet,
    #[error("invalid route: {0}")]
    InvalidRoute(String),
    #[error("invalid partial route: {0}")]
    InvalidPartialRoute(String),
    #[error("degree of node {node} is {degree}, expected 2")]
    Degree { node: usize, degree: u32 },
    #[error("edge vector contains a cycle without the depot through {0:?}")]
    DepotFreeCycle(Vec<usize>),
}

/// Problem data: complete graph costs, capacity, fleet size and demand scenarios.
///
/// Per-customer vectors are indexed by vertex id with slot 0 (the depot) unused.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    n: usize,
    cost: Vec<Vec<i64>>,
    capacity: i64,
    fleet_size: Option<usize>,
    demands: Vec<Vec<i64>>,
    probabilities: Vec<Rat>,
}

impl Instance {
    /// `cost` is the full `(n+1) x (n+1)` matrix; `demands[ξ]` has `n` entries for customers `1..=n`.
    pub fn new(
        name: impl Into<String>,
        cost: Vec<Vec<i64>>,
        capacity: i64,
        fleet_size: Option<usize>,
        demands: Vec<Vec<i64>>,
        probabilities: Vec<Rat>,
    ) -> Result<Self, ModelError> {
        let n = cost.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| {
            ModelError::Schema("cost matrix must cover the depot and at least one customer".into())
        })?;
        if capacity <= 0 {
            return Err(ModelError::Schema("capacity must be positive".into()));
        }
        if fleet_size == Some(0) {
            return Err(ModelError::Schema("fleet size must be positive".into()));
        }
        for (i, row) in cost.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(ModelError::Schema(format!("cost row {i} has {} entries", row.len())));
            }
            for (j, &c) in row.iter().enumerate() {
                if c < 0 {
                    return Err(ModelError::Negative { what: "cost", at: format!("({i}, {j})") });
                }
                if cost[j][i] != c || (i == j && c != 0) {
                    return Err(ModelError::Asymmetric(i, j));
                }
            }
        }
        if demands.is_empty() || demands.len() != probabilities.len() {
            return Err(ModelError::Schema(format!(
                "{} demand rows but {} probabilities",
                demands.len(),
                probabilities.len()
            )));
        }
        let mut padded = Vec::with_capacity(demands.len());
        for (s, row) in demands.into_iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::Schema(format!("demand row {s} has {} entries, expected {n}", row.len())));
            }
            if let Some(v) = row.iter().position(|&d| d < 0) {
                return Err(ModelError::Negative { what: "demand", at: format!("scenario {s}, customer {}", v + 1) });
            }
            let mut full = Vec::with_capacity(n + 1);
            full.push(0);
            full.extend(row);
            padded.push(full);
        }
        if let Some(s) = probabilities.iter().position(|p| p.is_negative()) {
            return Err(ModelError::Negative { what: "probability", at: format!("scenario {s}") });
        }
        let total: Rat = probabilities.iter().sum();
        if !total.is_one() {
            return Err(ModelError::ProbabilitySum(crate::rational::fmt_rat(&total)));
        }
        Ok(Instance { name: name.into(), n, cost, capacity, fleet_size, demands: padded, probabilities })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_customers(&self) -> usize {
        self.n
    }

    pub fn customers(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    pub fn n_scenarios(&self) -> usize {
        self.demands.len()
    }

    pub fn cost(&self, u: usize, v: usize) -> i64 {
        self.cost[u][v]
    }

    pub fn cost_matrix(&self) -> &[Vec<i64>] {
        &self.cost
    }

    pub fn capacity(&self) -> i64 {
        self.capacity
    }

    pub fn fleet_size(&self) -> Option<usize> {
        self.fleet_size
    }

    pub fn require_fleet_size(&self) -> Result<usize, ModelError> {
        self.fleet_size.ok_or(ModelError::MissingFleetSize)
    }

    pub fn probability(&self, scenario: usize) -> &Rat {
        &self.probabilities[scenario]
    }

    pub fn probabilities(&self) -> &[Rat] {
        &self.probabilities
    }

    pub fn demand(&self, scenario: usize, v: usize) -> i64 {
        self.demands[scenario][v]
    }

    /// Demand vector of a scenario, indexed by vertex (slot 0 is zero).
    pub fn scenario_demands(&self, scenario: usize) -> &[i64] {
        &self.demands[scenario]
    }

    pub fn expected_demand(&self, v: usize) -> Rat {
        self.probabilities
            .iter()
            .zip(&self.demands)
            .map(|(p, d)| p * int(d[v]))
            .sum()
    }

    pub fn set_demand(&self, scenario: usize, set: &[usize]) -> i64 {
        set.iter().map(|&v| self.demands[scenario][v]).sum()
    }

    /// `k_ξ(S) = ⌈d^ξ(S)/C⌉`.
    pub fn scenario_vehicles(&self, scenario: usize, set: &[usize]) -> i64 {
        ceil_div(self.set_demand(scenario, set), self.capacity)
    }

    /// `k̄(S) = ⌈d̄(S)/C⌉` with the expected demand.
    pub fn expected_vehicles(&self, set: &[usize]) -> i64 {
        let d: Rat = set.iter().map(|&v| self.expected_demand(v)).sum();
        ceil_rat(&(d / int(self.capacity)))
    }

    /// True when some scenario demand exceeds the capacity.
    pub fn needs_preprocessing(&self) -> bool {
        self.demands.iter().any(|row| row.iter().any(|&d| d > self.capacity))
    }

    /// Scenario indices sorted by descending total demand (ties by index).
    pub fn scenarios_by_total_demand(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n_scenarios()).collect();
        order.sort_by_key(|&s| std::cmp::Reverse(self.demands[s].iter().sum::<i64>()));
        order
    }

    pub fn with_fleet_size(mut self, k: Option<usize>) -> Self {
        self.fleet_size = k;
        self
    }

    pub(crate) fn demand_rows(&self) -> impl Iterator<Item = &[i64]> {
        self.demands.iter().map(|row| &row[1..])
    }
}

/// `⌈d(S)/C⌉` for an explicit demand vector indexed by vertex.
pub fn min_vehicles(set: &[usize], demand: &[i64], capacity: i64) -> Result<i64, ModelError> {
    if set.is_empty() {
        return Err(ModelError::EmptySet);
    }
    Ok(ceil_div(set.iter().map(|&v| demand[v]).sum(), capacity))
}

/// Splits demands above capacity into forced full-load trips.
///
/// Returns the reduced instance and the expected cost of the forced trips. A
/// positive multiple of `C` keeps a residual of `C` so the customer still
/// needs a full load.
pub fn preprocess_large_demands(inst: &Instance) -> (Instance, Rat) {
    let c = inst.capacity;
    let mut base = Rat::zero();
    let mut out = inst.clone();
    for (s, row) in out.demands.iter_mut().enumerate() {
        for v in 1..=inst.n {
            let d = row[v];
            if d <= c {
                continue;
            }
            let mut trips = d / c;
            let mut residual = d - trips * c;
            if residual == 0 {
                trips -= 1;
                residual = c;
            }
            row[v] = residual;
            base += &inst.probabilities[s] * int(2 * inst.cost[0][v] * trips);
        }
    }
    (out, base)
}
