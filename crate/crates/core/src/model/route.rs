use std::collections::BTreeSet;

use super::edges::{all_edges, edge_count, edge_index};
use super::instance::{Instance, ModelError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

/// Customer sequence of one vehicle; the depot is implicit at both ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Route {
    customers: Vec<usize>,
}

impl Route {
    pub fn new(customers: Vec<usize>) -> Result<Self, ModelError> {
        if customers.is_empty() {
            return Err(ModelError::InvalidRoute("no customers".into()));
        }
        if customers.contains(&0) {
            return Err(ModelError::InvalidRoute("depot inside the sequence".into()));
        }
        let distinct: BTreeSet<_> = customers.iter().collect();
        if distinct.len() != customers.len() {
            return Err(ModelError::InvalidRoute(format!("repeated customer in {customers:?}")));
        }
        Ok(Route { customers })
    }

    pub fn customers(&self) -> &[usize] {
        &self.customers
    }

    pub fn len(&self) -> usize {
        self.customers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.customers.is_empty()
    }

    pub fn directed(&self, direction: Direction) -> Vec<usize> {
        match direction {
            Direction::Forward => self.customers.clone(),
            Direction::Reverse => self.customers.iter().rev().copied().collect(),
        }
    }

    pub fn reversed(&self) -> Route {
        Route { customers: self.directed(Direction::Reverse) }
    }

    /// Representative with the smaller end customer first.
    pub fn canonical(&self) -> Route {
        if self.customers.first() <= self.customers.last() {
            self.clone()
        } else {
            self.reversed()
        }
    }

    /// Edges traversed, with the depot edge listed twice for a single customer.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let c = &self.customers;
        let mut out = Vec::with_capacity(c.len() + 1);
        out.push((0, c[0]));
        out.extend(c.windows(2).map(|w| (w[0], w[1])));
        out.push((c[c.len() - 1], 0));
        out
    }

    pub fn cost(&self, inst: &Instance) -> i64 {
        self.edges().iter().map(|&(a, b)| inst.cost(a, b)).sum()
    }

    /// Contiguous subsequence `v_i..=v_j` (0-based, inclusive).
    pub fn subroute(&self, i: usize, j: usize) -> Route {
        Route { customers: self.customers[i..=j].to_vec() }
    }
}

/// A set of routes covering every customer once, with its edge multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingPlan {
    routes: Vec<Route>,
    x: Vec<u8>,
}

impl RoutingPlan {
    pub fn from_routes(n_customers: usize, routes: Vec<Route>) -> Result<Self, ModelError> {
        let mut seen = vec![false; n_customers + 1];
        for r in &routes {
            for &v in r.customers() {
                if v > n_customers || std::mem::replace(&mut seen[v], true) {
                    return Err(ModelError::InvalidRoute(format!("customer {v} out of range or repeated")));
                }
            }
        }
        if let Some(v) = (1..=n_customers).find(|&v| !seen[v]) {
            return Err(ModelError::InvalidRoute(format!("customer {v} not covered")));
        }
        let mut x = vec![0u8; edge_count(n_customers)];
        for r in &routes {
            for (a, b) in r.edges() {
                x[edge_index(a, b)] += 1;
            }
        }
        Ok(RoutingPlan { routes, x })
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn x(&self) -> &[u8] {
        &self.x
    }

    pub fn x_f64(&self) -> Vec<f64> {
        self.x.iter().map(|&v| f64::from(v)).collect()
    }

    pub fn routing_cost(&self, inst: &Instance) -> i64 {
        self.routes.iter().map(|r| r.cost(inst)).sum()
    }
}

/// Decomposes an integer edge vector into routes.
pub fn routes_of(n_customers: usize, x: &[u8]) -> Result<RoutingPlan, ModelError> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n_customers + 1];
    for e in all_edges(n_customers) {
        for _ in 0..x[e.index()] {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
    }
    for v in 1..=n_customers {
        if adj[v].len() != 2 {
            return Err(ModelError::Degree { node: v, degree: adj[v].len() as u32 });
        }
    }
    let mut visited = vec![false; n_customers + 1];
    let mut routes = Vec::new();
    for &start in &adj[0] {
        if visited[start] {
            continue;
        }
        let mut seq = vec![start];
        visited[start] = true;
        let (mut prev, mut cur) = (0, start);
        loop {
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            if next == 0 {
                break;
            }
            if visited[next] {
                return Err(ModelError::InvalidRoute(format!("customer {next} reached twice")));
            }
            visited[next] = true;
            seq.push(next);
            (prev, cur) = (cur, next);
        }
        routes.push(Route::new(seq)?);
    }
    if let Some(v) = (1..=n_customers).find(|&v| !visited[v]) {
        let mut cycle = vec![v];
        let (mut prev, mut cur) = (v, adj[v][0]);
        while cur != v {
            cycle.push(cur);
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            (prev, cur) = (cur, next);
        }
        cycle.sort_unstable();
        return Err(ModelError::DepotFreeCycle(cycle));
    }
    RoutingPlan::from_routes(n_customers, routes)
}

/// Ordered disjoint customer sets with no two consecutive non-singletons.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialRoute {
    sets: Vec<Vec<usize>>,
}

impl PartialRoute {
    pub fn new(sets: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        if sets.is_empty() || sets.iter().any(|s| s.is_empty()) {
            return Err(ModelError::InvalidPartialRoute("empty set".into()));
        }
        let all: Vec<usize> = sets.iter().flatten().copied().collect();
        let distinct: BTreeSet<_> = all.iter().collect();
        if distinct.len() != all.len() || distinct.contains(&0) {
            return Err(ModelError::InvalidPartialRoute("sets overlap or contain the depot".into()));
        }
        if sets.windows(2).any(|w| w[0].len() > 1 && w[1].len() > 1) {
            return Err(ModelError::InvalidPartialRoute("consecutive non-singleton sets".into()));
        }
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        Ok(PartialRoute { sets })
    }

    pub fn from_route(route: &Route) -> Self {
        PartialRoute { sets: route.customers().iter().map(|&v| vec![v]).collect() }
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `V+(H)` in set order.
    pub fn customers(&self) -> Vec<usize> {
        self.sets.iter().flatten().copied().collect()
    }

    /// Sub-partial-route `(S_i, …, S_j)` (0-based, inclusive).
    pub fn sub(&self, i: usize, j: usize) -> PartialRoute {
        PartialRoute { sets: self.sets[i..=j].to_vec() }
    }

    pub fn is_all_singletons(&self) -> bool {
        self.sets.iter().all(|s| s.len() == 1)
    }

    pub fn reversed(&self) -> PartialRoute {
        PartialRoute { sets: self.sets.iter().rev().cloned().collect() }
    }

    /// Orientation-independent representative.
    pub fn canonical(&self) -> PartialRoute {
        let rev = self.reversed();
        if rev < *self {
            rev
        } else {
            self.clone()
        }
    }
}

/// Whether `route` visits exactly `V+(H)` passing through `S_1, …, S_ℓ` in order
/// (either direction, any order inside a set).
pub fn adheres(route: &Route, h: &PartialRoute) -> bool {
    let factors = |seq: &[usize]| {
        let mut pos = 0;
        for set in h.sets() {
            let end = pos + set.len();
            if end > seq.len() {
                return false;
            }
            let mut chunk = seq[pos..end].to_vec();
            chunk.sort_unstable();
            if chunk != *set {
                return false;
            }
            pos = end;
        }
        pos == seq.len()
    };
    factors(&route.directed(Direction::Forward)) || factors(&route.directed(Direction::Reverse))
}
