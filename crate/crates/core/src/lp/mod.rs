//! Linear and mixed-integer programming on top of HiGHS.
//!
//! Row duals follow one sign convention for a minimisation: `≥` rows carry
//! nonnegative duals and `≤` rows nonpositive ones.

mod highs;

use std::collections::HashMap;
use std::hash::Hash;
use std::path::Path;
use std::time::{Duration, Instant};

use thiserror::Error;

pub const INTEGRALITY_TOL: f64 = 1e-6;
pub const DUAL_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("model is infeasible")]
    Infeasible,
    #[error("model is unbounded")]
    Unbounded,
    #[error("time limit reached")]
    TimeLimit,
    #[error("solver backend: {0}")]
    Backend(String),
    #[error("lazy verifier returned a row that the candidate satisfies (slack {0})")]
    ContractViolation(f64),
    #[error("dual sign convention broken on row {row}: {value}")]
    DualSign { row: usize, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub lower: f64,
    pub upper: f64,
    pub integer: bool,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub coeffs: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl LinearRow {
    pub fn new(coeffs: Vec<(VarId, f64)>, sense: Sense, rhs: f64) -> Self {
        LinearRow { coeffs, sense, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, c)| c * x[v.0]).sum()
    }

    /// Amount by which `x` violates the row (negative when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let a = self.activity(x);
        match self.sense {
            Sense::Ge => self.rhs - a,
            Sense::Le => a - self.rhs,
            Sense::Eq => (a - self.rhs).abs(),
        }
    }
}

/// Variables, rows and optional row tags used to look duals up.
#[derive(Debug, Clone)]
pub struct LinearModel<T = String> {
    vars: Vec<Variable>,
    rows: Vec<LinearRow>,
    tags: Vec<Option<T>>,
    tag_index: HashMap<T, RowId>,
    offset: f64,
}

impl<T> Default for LinearModel<T> {
    fn default() -> Self {
        LinearModel { vars: Vec::new(), rows: Vec::new(), tags: Vec::new(), tag_index: HashMap::new(), offset: 0.0 }
    }
}

impl<T: Clone + Eq + Hash> LinearModel<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, lower: f64, upper: f64, objective: f64, integer: bool) -> VarId {
        self.vars.push(Variable { lower, upper, integer, objective });
        VarId(self.vars.len() - 1)
    }

    pub fn add_row(&mut self, row: LinearRow) -> RowId {
        self.rows.push(row);
        self.tags.push(None);
        RowId(self.rows.len() - 1)
    }

    /// Adds a row retrievable by `tag`; a repeated tag points at the newest row.
    pub fn add_tagged_row(&mut self, row: LinearRow, tag: T) -> RowId {
        let id = self.add_row(row);
        self.tags[id.0] = Some(tag.clone());
        self.tag_index.insert(tag, id);
        id
    }

    pub fn row_by_tag(&self, tag: &T) -> Option<RowId> {
        self.tag_index.get(tag).copied()
    }

    pub fn tagged_rows(&self) -> impl Iterator<Item = (RowId, &T)> {
        self.tags.iter().enumerate().filter_map(|(i, t)| t.as_ref().map(|t| (RowId(i), t)))
    }

    pub fn set_objective_offset(&mut self, offset: f64) {
        self.offset = offset;
    }

    pub fn set_integer(&mut self, var: VarId, integer: bool) {
        self.vars[var.0].integer = integer;
    }

    /// Copy with every integrality flag cleared.
    pub fn set_objective(&mut self, var: VarId, coef: f64) {
        self.vars[var.0].objective = coef;
    }

    pub fn relaxed(&self) -> Self {
        let mut out = self.clone();
        for v in &mut out.vars {
            v.integer = false;
        }
        out
    }
}

impl<T> LinearModel<T> {
    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn rows(&self) -> &[LinearRow] {
        &self.rows
    }

    pub fn row(&self, id: RowId) -> &LinearRow {
        &self.rows[id.0]
    }

    pub fn n_variables(&self) -> usize {
        self.vars.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective_offset(&self) -> f64 {
        self.offset
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.offset + self.vars.iter().zip(x).map(|(v, x)| v.objective * x).sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    TimeLimit,
    IterationLimit,
    Failed(i32),
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub primal: Option<Vec<f64>>,
    /// Row duals; present only for an LP solved to optimality.
    pub duals: Option<Vec<f64>>,
    pub objective: f64,
    /// Proven lower bound (equals the objective for an optimal LP).
    pub dual_bound: f64,
    pub wall_time: Duration,
}

impl SolveOutcome {
    pub fn primal(&self) -> &[f64] {
        self.primal.as_deref().unwrap_or(&[])
    }

    pub fn dual(&self, row: RowId) -> f64 {
        self.duals.as_ref().map_or(0.0, |d| d[row.0])
    }

    fn require_optimal(self) -> Result<Self, LpError> {
        match self.status {
            SolveStatus::Optimal => Ok(self),
            SolveStatus::Infeasible => Err(LpError::Infeasible),
            SolveStatus::Unbounded => Err(LpError::Unbounded),
            SolveStatus::TimeLimit | SolveStatus::IterationLimit => Err(LpError::TimeLimit),
            SolveStatus::Failed(code) => Err(LpError::Backend(format!("model status {code}"))),
        }
    }
}

/// Solves the continuous relaxation and returns primal values and row duals.
///
/// Non-optimal terminations are reported through `status`.
pub fn solve_lp<T>(model: &LinearModel<T>, time_limit: Option<Duration>) -> Result<SolveOutcome, LpError> {
    let out = highs::run(model, false, time_limit)?;
    if let Some(duals) = &out.duals {
        check_dual_signs(model, duals)?;
    }
    Ok(out)
}

/// Like [`solve_lp`] but turns every non-optimal status into an error.
pub fn solve_lp_optimal<T>(model: &LinearModel<T>, time_limit: Option<Duration>) -> Result<SolveOutcome, LpError> {
    solve_lp(model, time_limit)?.require_optimal()
}

pub fn solve_mip<T>(model: &LinearModel<T>, time_limit: Option<Duration>) -> Result<SolveOutcome, LpError> {
    highs::run(model, true, time_limit)
}

fn check_dual_signs<T>(model: &LinearModel<T>, duals: &[f64]) -> Result<(), LpError> {
    for (i, (row, &d)) in model.rows().iter().zip(duals).enumerate() {
        let wrong = match row.sense {
            Sense::Ge => d < -DUAL_TOL,
            Sense::Le => d > DUAL_TOL,
            Sense::Eq => false,
        };
        if wrong {
            return Err(LpError::DualSign { row: i, value: d });
        }
    }
    Ok(())
}

/// Result of the outer lazy-constraint loop.
#[derive(Debug, Clone)]
pub struct LazyOutcome {
    pub outcome: SolveOutcome,
    pub iterations: usize,
    /// Dual bound after each MIP solve.
    pub bounds: Vec<f64>,
    pub rows_added: usize,
}

/// Solves the MIP, hands each integer incumbent to `verifier`, appends the
/// returned rows and repeats until the verifier accepts.
///
/// Every returned row must be violated by the candidate; debug builds reject
/// rows that are not. On timeout the last outcome is returned with status
/// `TimeLimit`.
pub fn solve_mip_with_lazy<T, F>(
    model: &mut LinearModel<T>,
    mut verifier: F,
    time_limit: Option<Duration>,
) -> Result<LazyOutcome, LpError>
where
    T: Clone + Eq + Hash,
    F: FnMut(&[f64]) -> Vec<LinearRow>,
{
    let started = Instant::now();
    let mut bounds = Vec::new();
    let mut rows_added = 0;
    let mut iterations = 0;
    loop {
        let remaining = match time_limit {
            Some(limit) => match limit.checked_sub(started.elapsed()) {
                Some(r) if !r.is_zero() => Some(r),
                _ => {
                    let outcome = SolveOutcome {
                        status: SolveStatus::TimeLimit,
                        primal: None,
                        duals: None,
                        objective: f64::NAN,
                        dual_bound: bounds.last().copied().unwrap_or(f64::NEG_INFINITY),
                        wall_time: started.elapsed(),
                    };
                    return Ok(LazyOutcome { outcome, iterations, bounds, rows_added });
                }
            },
            None => None,
        };
        let mut outcome = solve_mip(model, remaining)?;
        iterations += 1;
        let bound = bounds.last().map_or(outcome.dual_bound, |&b: &f64| b.max(outcome.dual_bound));
        bounds.push(bound);
        outcome.dual_bound = bound;
        match outcome.status {
            SolveStatus::Optimal => {}
            SolveStatus::Infeasible => return Err(LpError::Infeasible),
            SolveStatus::Unbounded => return Err(LpError::Unbounded),
            SolveStatus::Failed(code) => return Err(LpError::Backend(format!("model status {code}"))),
            SolveStatus::TimeLimit | SolveStatus::IterationLimit => {
                outcome.wall_time = started.elapsed();
                return Ok(LazyOutcome { outcome, iterations, bounds, rows_added });
            }
        }
        let rows = verifier(outcome.primal());
        if rows.is_empty() {
            outcome.wall_time = started.elapsed();
            return Ok(LazyOutcome { outcome, iterations, bounds, rows_added });
        }
        for row in rows {
            let v = row.violation(outcome.primal());
            if cfg!(debug_assertions) && v <= 0.0 {
                return Err(LpError::ContractViolation(v));
            }
            model.add_row(row);
            rows_added += 1;
        }
    }
}

/// Writes the model in a format chosen by the file extension (`.lp`, `.mps`).
pub fn write_model<T>(model: &LinearModel<T>, path: &Path) -> Result<(), LpError> {
    highs::write(model, path)
}
