//! Undirected edge indexing over `V = {0} ∪ V+`.
//!
//! Edge `{u, v}` with `u < v` lives at index `v(v-1)/2 + u`, so iterating
//! `v = 1..=n, u = 0..v` visits edges in index order.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b);
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn index(self) -> usize {
        self.v * (self.v - 1) / 2 + self.u
    }

    pub fn is_depot_edge(self) -> bool {
        self.u == 0
    }
}

pub fn edge_index(a: usize, b: usize) -> usize {
    Edge::new(a, b).index()
}

pub fn edge_count(n_customers: usize) -> usize {
    (n_customers + 1) * n_customers / 2
}

/// All edges of the complete graph on `n_customers + 1` nodes in index order.
pub fn all_edges(n_customers: usize) -> impl Iterator<Item = Edge> {
    (1..=n_customers).flat_map(|v| (0..v).map(move |u| Edge { u, v }))
}

/// Sum of `x` over the edges with both endpoints in `set` (`x(E(S))`).
pub fn inner_sum(x: &[f64], set: &[usize]) -> f64 {
    let mut total = 0.0;
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            total += x[edge_index(a, b)];
        }
    }
    total
}

/// Sum of `x` over the edges between two disjoint sets.
pub fn cross_sum(x: &[f64], left: &[usize], right: &[usize]) -> f64 {
    left.iter()
        .flat_map(|&a| right.iter().map(move |&b| x[edge_index(a, b)]))
        .sum()
}

pub fn inner_edges(set: &[usize]) -> Vec<Edge> {
    let mut edges = Vec::new();
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            edges.push(Edge::new(a, b));
        }
    }
    edges
}
