use std::collections::BTreeMap;
use std::time::Duration;

use serde_json::{json, Value};

use crate::cuts::{CutKind, LinearCut};
use crate::lp::LinearModel;
use crate::model::{Route, RoutingPlan};
use crate::rational::{fmt_rat, to_f64, Rat};
use crate::recourse::RecourseBreakdown;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    TimeLimit,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::TimeLimit => "time_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteReport {
    pub route: Route,
    pub cost: i64,
    pub recourse: RecourseBreakdown,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: Status,
    /// Exact cost of the best plan, preprocessing base cost included.
    pub value: Option<Rat>,
    pub bound: f64,
    pub phase1_value: Option<f64>,
    pub root_bound: f64,
    pub base_cost: Rat,
    pub plan: Option<RoutingPlan>,
    pub routes: Vec<RouteReport>,
    pub cut_counts: BTreeMap<CutKind, usize>,
    pub outer_iterations: usize,
    pub phase1_rounds: usize,
    pub root_rounds: usize,
    pub phase1_time: Duration,
    pub root_time: Duration,
    pub total_time: Duration,
    pub cuts: Vec<LinearCut>,
    pub model: LinearModel,
}

fn gap(value: f64, bound: f64) -> f64 {
    if value.abs() < 1e-9 {
        0.0
    } else {
        (100.0 * (value - bound) / value.abs()).max(0.0)
    }
}

impl SolveReport {
    pub fn value_f64(&self) -> Option<f64> {
        self.value.as_ref().map(to_f64)
    }

    pub fn gap_pct(&self) -> Option<f64> {
        self.value_f64().map(|v| gap(v, self.bound))
    }

    pub fn root_gap_pct(&self) -> Option<f64> {
        self.value_f64().map(|v| gap(v, self.root_bound))
    }

    pub fn cuts_of(&self, kinds: &[CutKind]) -> usize {
        kinds.iter().map(|k| self.cut_counts.get(k).copied().unwrap_or(0)).sum()
    }

    pub fn to_json(&self) -> Value {
        let routes: Vec<Value> = self
            .routes
            .iter()
            .map(|r| {
                json!({
                    "customers": r.route.customers(),
                    "cost": r.cost,
                    "recourse": fmt_rat(&r.recourse.total),
                    "per_customer": r.recourse.per_customer.iter()
                        .map(|(v, q)| (v.to_string(), Value::from(fmt_rat(q))))
                        .collect::<serde_json::Map<_, _>>(),
                })
            })
            .collect();
        let counts: serde_json::Map<String, Value> =
            self.cut_counts.iter().map(|(k, c)| (k.label().to_string(), Value::from(*c))).collect();
        json!({
            "status": self.status.label(),
            "value": self.value.as_ref().map(fmt_rat),
            "value_f64": self.value_f64(),
            "bound": self.bound,
            "gap_pct": self.gap_pct(),
            "root_bound": self.root_bound,
            "root_gap_pct": self.root_gap_pct(),
            "phase1_value": self.phase1_value,
            "base_cost": fmt_rat(&self.base_cost),
            "outer_iterations": self.outer_iterations,
            "phase1_rounds": self.phase1_rounds,
            "root_rounds": self.root_rounds,
            "time_s": {
                "phase1": self.phase1_time.as_secs_f64(),
                "root": self.root_time.as_secs_f64(),
                "total": self.total_time.as_secs_f64(),
            },
            "cut_counts": counts,
            "routes": routes,
        })
    }
}
