//! Thin safe wrapper over the HiGHS C API.

use std::ffi::{c_void, CString};
use std::os::raw::c_int;
use std::path::Path;
use std::time::{Duration, Instant};

use highs_sys::*;

use super::{LinearModel, LpError, Sense, SolveOutcome, SolveStatus};

struct Handle(*mut c_void);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { Highs_destroy(self.0) }
    }
}

impl Handle {
    fn new() -> Self {
        let h = Handle(unsafe { Highs_create() });
        h.set_bool("output_flag", false);
        h.set_int("threads", 1);
        h
    }

    fn set_bool(&self, name: &str, value: bool) {
        let key = CString::new(name).expect("option name");
        unsafe { Highs_setBoolOptionValue(self.0, key.as_ptr(), c_int::from(value)) };
    }

    fn set_int(&self, name: &str, value: i32) {
        let key = CString::new(name).expect("option name");
        unsafe { Highs_setIntOptionValue(self.0, key.as_ptr(), value) };
    }

    fn set_double(&self, name: &str, value: f64) {
        let key = CString::new(name).expect("option name");
        unsafe { Highs_setDoubleOptionValue(self.0, key.as_ptr(), value) };
    }

    fn set_string(&self, name: &str, value: &str) {
        let key = CString::new(name).expect("option name");
        let val = CString::new(value).expect("option value");
        unsafe { Highs_setStringOptionValue(self.0, key.as_ptr(), val.as_ptr()) };
    }

    fn double_info(&self, name: &str) -> Option<f64> {
        let key = CString::new(name).expect("info name");
        let mut value = 0.0;
        let status = unsafe { Highs_getDoubleInfoValue(self.0, key.as_ptr(), &mut value) };
        (status == kHighsStatusOk).then_some(value)
    }

    fn pass<T>(&self, model: &LinearModel<T>, integral: bool) -> Result<(), LpError> {
        let inf = unsafe { Highs_getInfinity(self.0) };
        let clamp = |v: f64| if v.is_infinite() { v.signum() * inf } else { v };
        let vars = model.variables();
        let cost: Vec<f64> = vars.iter().map(|v| v.objective).collect();
        let lower: Vec<f64> = vars.iter().map(|v| clamp(v.lower)).collect();
        let upper: Vec<f64> = vars.iter().map(|v| clamp(v.upper)).collect();
        let mut row_lower = Vec::with_capacity(model.n_rows());
        let mut row_upper = Vec::with_capacity(model.n_rows());
        let mut start = Vec::with_capacity(model.n_rows());
        let mut index = Vec::new();
        let mut value = Vec::new();
        for row in model.rows() {
            let (lo, hi) = match row.sense {
                Sense::Ge => (row.rhs, inf),
                Sense::Le => (-inf, row.rhs),
                Sense::Eq => (row.rhs, row.rhs),
            };
            row_lower.push(lo);
            row_upper.push(hi);
            start.push(to_int(index.len())?);
            for &(var, coef) in &row.coeffs {
                index.push(to_int(var.0)?);
                value.push(coef);
            }
        }
        let integrality: Vec<c_int> = vars
            .iter()
            .map(|v| if v.integer { kHighsVarTypeInteger } else { kHighsVarTypeContinuous })
            .collect();
        let (ncol, nrow, nnz) = (to_int(vars.len())?, to_int(model.n_rows())?, to_int(index.len())?);
        let status = unsafe {
            if integral {
                Highs_passMip(
                    self.0, ncol, nrow, nnz, kHighsMatrixFormatRowwise, kHighsObjSenseMinimize,
                    model.objective_offset(), cost.as_ptr(), lower.as_ptr(), upper.as_ptr(),
                    row_lower.as_ptr(), row_upper.as_ptr(), start.as_ptr(), index.as_ptr(),
                    value.as_ptr(), integrality.as_ptr(),
                )
            } else {
                Highs_passLp(
                    self.0, ncol, nrow, nnz, kHighsMatrixFormatRowwise, kHighsObjSenseMinimize,
                    model.objective_offset(), cost.as_ptr(), lower.as_ptr(), upper.as_ptr(),
                    row_lower.as_ptr(), row_upper.as_ptr(), start.as_ptr(), index.as_ptr(),
                    value.as_ptr(),
                )
            }
        };
        if status == kHighsStatusError {
            return Err(LpError::Backend("model rejected".into()));
        }
        Ok(())
    }

    fn status(&self) -> SolveStatus {
        match unsafe { Highs_getModelStatus(self.0) } {
            s if s == kHighsModelStatusOptimal || s == kHighsModelStatusModelEmpty => SolveStatus::Optimal,
            s if s == kHighsModelStatusInfeasible => SolveStatus::Infeasible,
            s if s == kHighsModelStatusUnbounded || s == kHighsModelStatusUnboundedOrInfeasible => {
                SolveStatus::Unbounded
            }
            s if s == kHighsModelStatusTimeLimit || s == kHighsModelStatusInterrupt => SolveStatus::TimeLimit,
            s if s == kHighsModelStatusIterationLimit || s == kHighsModelStatusSolutionLimit => {
                SolveStatus::IterationLimit
            }
            other => SolveStatus::Failed(other),
        }
    }
}

fn to_int(v: usize) -> Result<c_int, LpError> {
    c_int::try_from(v).map_err(|_| LpError::Backend("model too large".into()))
}

fn apply_limit(h: &Handle, time_limit: Option<Duration>) {
    if let Some(limit) = time_limit {
        h.set_double("time_limit", limit.as_secs_f64().max(1e-3));
    }
}

pub(super) fn run<T>(
    model: &LinearModel<T>,
    integral: bool,
    time_limit: Option<Duration>,
) -> Result<SolveOutcome, LpError> {
    let started = Instant::now();
    let h = Handle::new();
    let integral = integral && model.variables().iter().any(|v| v.integer);
    apply_limit(&h, time_limit);
    if integral {
        h.set_double("mip_rel_gap", 0.0);
        h.set_double("mip_abs_gap", 1e-7);
    } else {
        h.set_string("solver", "simplex");
    }
    h.pass(model, integral)?;
    if unsafe { Highs_run(h.0) } == kHighsStatusError {
        return Err(LpError::Backend("run failed".into()));
    }
    let status = h.status();
    let (ncol, nrow) = (model.n_variables(), model.n_rows());
    let mut primal = vec![0.0; ncol];
    let mut col_dual = vec![0.0; ncol];
    let mut row_value = vec![0.0; nrow];
    let mut row_dual = vec![0.0; nrow];
    let has_primal = match status {
        SolveStatus::Optimal => true,
        SolveStatus::TimeLimit | SolveStatus::IterationLimit => {
            let mut sol_status: c_int = 0;
            let key = CString::new("primal_solution_status").expect("info name");
            unsafe { Highs_getIntInfoValue(h.0, key.as_ptr(), &mut sol_status) };
            sol_status == kHighsSolutionStatusFeasible
        }
        _ => false,
    };
    if has_primal {
        unsafe {
            Highs_getSolution(
                h.0,
                primal.as_mut_ptr(),
                col_dual.as_mut_ptr(),
                row_value.as_mut_ptr(),
                row_dual.as_mut_ptr(),
            )
        };
    }
    let objective = if has_primal { unsafe { Highs_getObjectiveValue(h.0) } } else { f64::NAN };
    let dual_bound = if integral {
        h.double_info("mip_dual_bound").unwrap_or(f64::NEG_INFINITY)
    } else if status == SolveStatus::Optimal {
        objective
    } else {
        f64::NEG_INFINITY
    };
    let duals = (!integral && status == SolveStatus::Optimal).then_some(row_dual);
    Ok(SolveOutcome {
        status,
        primal: has_primal.then_some(primal),
        duals,
        objective,
        dual_bound,
        wall_time: started.elapsed(),
    })
}

pub(super) fn write<T>(model: &LinearModel<T>, path: &Path) -> Result<(), LpError> {
    let h = Handle::new();
    h.pass(model, model.variables().iter().any(|v| v.integer))?;
    let name = CString::new(path.to_string_lossy().as_bytes())
        .map_err(|_| LpError::Backend("path contains NUL".into()))?;
    if unsafe { Highs_writeModel(h.0, name.as_ptr()) } == kHighsStatusError {
        return Err(LpError::Backend(format!("could not write {}", path.display())));
    }
    Ok(())
}
