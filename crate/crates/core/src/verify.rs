//! Property battery comparing production code against the brute-force oracles.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cuts::{set_cut_bundle, Projection};
use crate::generate::{generate, random_route_case, GeneratorConfig};
use crate::model::{FirstStage, Instance, Route};
use crate::oracles::{
    brute_force_scenario_optimal, enumerate_optimal, hull_integrality_probe, maxflow_membership,
    simulate_classical_cost, OracleRecourse,
};
use crate::rational::{fmt_rat, int, ratio, Rat};
use crate::recourse::{
    classical_recourse, is_recourse_action, scenario_optimal_recourse, RecourseKind, RecourseWeights,
};
use crate::solver::{solve, Mode, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sizes {
    Tiny,
    Full,
}

/// Deliberate bugs the battery must catch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Projection coefficient without the weight normalisation.
    Phi,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
    pub seconds: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

struct Counts {
    routes: usize,
    solves: usize,
}

fn counts(sizes: Sizes) -> Counts {
    match sizes {
        Sizes::Tiny => Counts { routes: 60, solves: 3 },
        Sizes::Full => Counts { routes: 400, solves: 12 },
    }
}

pub fn run_battery(sizes: Sizes, fault: Fault, seed: u64) -> Vec<CheckResult> {
    let c = counts(sizes);
    let mut out = Vec::new();
    let mut timed = |name: &'static str, f: &mut dyn FnMut() -> (usize, Option<String>)| {
        let t = Instant::now();
        let (cases, failure) = f();
        out.push(CheckResult { name, cases, failure, seconds: t.elapsed().as_secs_f64() });
    };
    timed("set cut golden values", &mut || (1, golden_set_cut(fault).err()));
    timed("classical formula vs simulation", &mut || classical_check(seed, c.routes));
    timed("scenario-optimal LP vs enumeration", &mut || optimal_check(seed, c.routes / 2));
    timed("subroute test vs max-flow", &mut || membership_check(seed, c.routes));
    timed("covering polytope integrality", &mut || integrality_check(seed, c.routes / 4));
    timed("solver vs enumeration", &mut || solver_check(seed, c.solves));
    out
}

/// Three customers of weights 2, 3, 4 needing three vehicles, one allowed.
pub fn golden_instance() -> (Instance, RecourseWeights) {
    let cost = vec![vec![0, 1, 1, 1], vec![1, 0, 1, 1], vec![1, 1, 0, 1], vec![1, 1, 1, 0]];
    let inst = Instance::new("golden", cost, 10, None, vec![vec![10, 10, 10]], vec![int(1)]).unwrap();
    let w = RecourseWeights::new(vec![int(0), int(2), int(3), int(4)], vec![0, 1, 1, 1]).unwrap();
    (inst, w)
}

fn golden_set_cut(fault: Fault) -> Result<(), String> {
    let (inst, w) = golden_instance();
    let set = [1, 2, 3];
    let bundle = set_cut_bundle(&inst, &set, 1, &w).map_err(|e| e.to_string())?;
    let dual = &bundle.per_scenario[0];
    let expect = |ok: bool, what: &str| if ok { Ok(()) } else { Err(format!("{what}: {bundle:?}")) };
    expect(bundle.lower == int(5), "lower bound")?;
    expect(dual.alpha == int(3), "alpha")?;
    expect(dual.beta == vec![(1, int(-1))], "beta")?;
    let phi: BTreeMap<usize, Rat> = match fault {
        Fault::None => match bundle.certificate.project(&inst, &w).map_err(|e| e.to_string())? {
            Projection::Cut(cut) => cut.theta,
            Projection::Trivial => return Err("projection trivial".into()),
        },
        Fault::Phi => {
            let a = bundle.certificate.y_coefficients();
            a.iter().map(|(&(s, v), coef)| (v, coef / inst.probability(s))).collect()
        }
    };
    let want: BTreeMap<usize, Rat> = [(1, int(1)), (2, int(1)), (3, ratio(3, 4))].into_iter().collect();
    if phi != want {
        let got: Vec<String> = phi.iter().map(|(v, c)| format!("phi[{v}]={}", fmt_rat(c))).collect();
        return Err(format!(
            "S={{1,2,3}}, w=(2,3,4), b=1, k'=1, k=3, p=1: got {} expected phi[1]=1 phi[2]=1 phi[3]=3/4",
            got.join(" ")
        ));
    }
    Ok(())
}

fn route_cases(seed: u64, count: usize, max_len: usize, max_scen: usize) -> impl Iterator<Item = (Instance, Route)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| {
        let len = rng.gen_range(1..=max_len);
        let scen = rng.gen_range(1..=max_scen);
        let cap = rng.gen_range(3..=15);
        random_route_case(&mut rng, len, scen, cap).unwrap()
    })
}

fn classical_check(seed: u64, count: usize) -> (usize, Option<String>) {
    for (inst, route) in route_cases(seed, count, 8, 4) {
        let fast = classical_recourse(&inst, &route).map(|b| b.total);
        let slow = simulate_classical_cost(&inst, &route);
        if fast.as_ref() != Ok(&slow) {
            return (count, Some(format!("route {:?}: formula {fast:?} vs simulation {}", route.customers(), fmt_rat(&slow))));
        }
    }
    (count, None)
}

fn optimal_check(seed: u64, count: usize) -> (usize, Option<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for (inst, route) in route_cases(seed.wrapping_add(1), count, 6, 3) {
        let b = rng.gen_range(1..=2);
        let w = RecourseWeights::for_instance(&inst, crate::recourse::WeightScheme::Classical, b);
        let lp = scenario_optimal_recourse(&inst, &route, &w).map(|r| r.value);
        let brute = brute_force_scenario_optimal(&inst, &route, &w);
        if lp.as_ref().ok() != brute.as_ref().ok() {
            return (count, Some(format!("route {:?}, b={b}: LP {lp:?} vs enumeration {brute:?}", route.customers())));
        }
    }
    (count, None)
}

fn membership_check(seed: u64, count: usize) -> (usize, Option<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf10);
    for (inst, route) in route_cases(seed.wrapping_add(2), count, 7, 2) {
        let s = rng.gen_range(0..inst.n_scenarios());
        let mut y = vec![0i64; inst.n_customers() + 1];
        for &v in route.customers() {
            y[v] = rng.gen_range(0..=2);
        }
        let a = is_recourse_action(&inst, &route, s, &y);
        let b = maxflow_membership(&inst, &route, s, &y);
        if a != Ok(b) {
            return (count, Some(format!("route {:?}, y={y:?}: subroutes {a:?} vs flow {b}", route.customers())));
        }
    }
    (count, None)
}

fn integrality_check(seed: u64, count: usize) -> (usize, Option<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1417);
    for (inst, route) in route_cases(seed.wrapping_add(3), count, 6, 1) {
        if !hull_integrality_probe(&inst, &route, 0, 2, 10, &mut rng) {
            return (count, Some(format!("fractional vertex on route {:?}", route.customers())));
        }
    }
    (count, None)
}

fn solver_check(seed: u64, count: usize) -> (usize, Option<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x501);
    let mut done = 0;
    for i in 0..count {
        let n = rng.gen_range(3..=5);
        let scen = rng.gen_range(1..=3);
        let inst = match generate(&GeneratorConfig::new(n, scen, 20, seed.wrapping_add(i as u64))) {
            Ok(inst) => inst,
            Err(e) => return (done, Some(e.to_string())),
        };
        let setups = [
            (RecourseKind::ScenarioOptimal, Mode::Ils),
            (RecourseKind::ScenarioOptimal, Mode::Sri),
            (RecourseKind::Classical, Mode::Ils),
            (RecourseKind::Classical, Mode::IlsPlusSri),
        ];
        for first_stage in [FirstStage::Cvrp, FirstStage::Subtour] {
            for (recourse, mode) in setups {
                let cfg = SolverConfig { first_stage, recourse, mode, ..SolverConfig::default() };
                let weights = match recourse {
                    RecourseKind::Classical => RecourseWeights::classical(&inst),
                    RecourseKind::ScenarioOptimal => RecourseWeights::for_instance(&inst, cfg.weights, cfg.bound),
                };
                let oracle = enumerate_optimal(&inst, first_stage, &OracleRecourse { kind: recourse, weights });
                let report = solve(&inst, &cfg);
                done += 1;
                let ok = match (&oracle, &report) {
                    (Ok((v, _)), Ok(r)) => r.value.as_ref() == Some(v),
                    _ => false,
                };
                if !ok {
                    let got = report.map(|r| r.value.map(|v| fmt_rat(&v)));
                    let want = oracle.map(|(v, _)| fmt_rat(&v));
                    return (
                        done,
                        Some(format!("{} {first_stage:?} {recourse:?} {mode}: solver {got:?} vs enumeration {want:?}", inst.name())),
                    );
                }
            }
        }
    }
    (done, None)
}
