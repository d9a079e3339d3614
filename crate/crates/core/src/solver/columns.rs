use crate::cuts::LinearCut;
use crate::lp::{LinearRow, Sense, VarId};
use crate::model::edge_count;
use crate::rational::to_f64;

/// Column layout: edges first, then `θ_v` or `y^ξ_v` blocks.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Columns {
    pub n: usize,
    pub edges: usize,
    pub theta: bool,
    pub scenarios: usize,
}

impl Columns {
    pub fn theta_space(n: usize) -> Self {
        Columns { n, edges: edge_count(n), theta: true, scenarios: 0 }
    }

    pub fn y_space(n: usize, scenarios: usize) -> Self {
        Columns { n, edges: edge_count(n), theta: false, scenarios }
    }

    pub fn x(&self, e: usize) -> VarId {
        VarId(e)
    }

    pub fn theta(&self, v: usize) -> VarId {
        debug_assert!(self.theta && v >= 1 && v <= self.n);
        VarId(self.edges + v - 1)
    }

    pub fn y(&self, s: usize, v: usize) -> VarId {
        debug_assert!(!self.theta && v >= 1 && v <= self.n && s < self.scenarios);
        VarId(self.edges + s * self.n + v - 1)
    }

    pub fn row(&self, cut: &LinearCut) -> LinearRow {
        let mut coeffs = Vec::new();
        for (e, c) in &cut.x {
            coeffs.push((self.x(e.index()), to_f64(c)));
        }
        for (&v, c) in &cut.theta {
            coeffs.push((self.theta(v), to_f64(c)));
        }
        for (&(s, v), c) in &cut.y {
            coeffs.push((self.y(s, v), to_f64(c)));
        }
        coeffs.retain(|&(_, c)| c != 0.0);
        LinearRow::new(coeffs, Sense::Ge, to_f64(&cut.rhs))
    }

    /// Splits a primal vector into `x` and the vertex-indexed θ (entry 0 unused).
    pub fn split_theta(&self, primal: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let x = primal[..self.edges].to_vec();
        let mut theta = vec![0.0; self.n + 1];
        theta[1..].copy_from_slice(&primal[self.edges..self.edges + self.n]);
        (x, theta)
    }

    /// Splits a primal vector into `x` and `y[ξ][v]` (column 0 unused).
    pub fn split_y(&self, primal: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let x = primal[..self.edges].to_vec();
        let y = (0..self.scenarios)
            .map(|s| {
                let mut row = vec![0.0; self.n + 1];
                row[1..].copy_from_slice(&primal[self.edges + s * self.n..self.edges + (s + 1) * self.n]);
                row
            })
            .collect();
        (x, y)
    }
}

/// Adds the edge columns (integral, `[0,1]` or `[0,2]` at the depot) and the
/// θ or `y` columns of `cols`, with their objective coefficients.
pub(crate) fn add_columns<T: Clone + Eq + std::hash::Hash>(
    model: &mut crate::lp::LinearModel<T>,
    prep: &super::Prepared,
    cols: &Columns,
) {
    for e in crate::model::all_edges(cols.n) {
        let upper = if e.is_depot_edge() { 2.0 } else { 1.0 };
        model.add_var(0.0, upper, prep.inst.cost(e.u, e.v) as f64, true);
    }
    if cols.theta {
        for _ in 1..=cols.n {
            model.add_var(0.0, f64::INFINITY, 1.0, false);
        }
    } else {
        for s in 0..cols.scenarios {
            let p = to_f64(prep.inst.probability(s));
            for v in 1..=cols.n {
                model.add_var(0.0, f64::INFINITY, p * to_f64(prep.weights.w(v)), false);
            }
        }
    }
}

/// Degree equalities and, under the CVRP set, the depot degree `2k`.
pub(crate) fn add_degree_rows<T: Clone + Eq + std::hash::Hash>(
    model: &mut crate::lp::LinearModel<T>,
    prep: &super::Prepared,
    cols: &Columns,
) {
    use crate::model::edge_index;
    let n = cols.n;
    for v in 1..=n {
        let coeffs = (0..=n).filter(|&u| u != v).map(|u| (cols.x(edge_index(u, v)), 1.0)).collect();
        model.add_row(LinearRow::new(coeffs, Sense::Eq, 2.0));
    }
    if let Some(k) = prep.fleet {
        let coeffs = (1..=n).map(|v| (cols.x(edge_index(0, v)), 1.0)).collect();
        model.add_row(LinearRow::new(coeffs, Sense::Eq, 2.0 * k as f64));
    }
}
