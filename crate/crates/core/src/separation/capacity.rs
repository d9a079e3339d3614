//! Greedy search for customer sets violating `x(E(S)) ≤ |S| − k(S)`.

use std::collections::BTreeSet;

use crate::model::{edge_index, inner_sum};
use crate::rational::ceil_div;

pub const MAX_SETS: usize = 10;
const SUPPORT_TOL: f64 = 1e-6;

/// Violation `x(E(S)) − |S| + k(S)` of the capacity inequality.
pub fn capacity_violation(x: &[f64], set: &[usize], vehicles: i64) -> f64 {
    inner_sum(x, set) - set.len() as f64 + vehicles as f64
}

/// Connected components of the customer support graph (`x_e > 0`, depot removed).
pub fn support_components(x: &[f64], n: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n + 1];
    let mut comps = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for v in 1..=n {
                if !seen[v] && v != u && x[edge_index(u, v)] > SUPPORT_TOL {
                    seen[v] = true;
                    comp.push(v);
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Up to [`MAX_SETS`] sets with violation above `tol`, most violated first.
///
/// Candidates are the support components plus greedy grow/shrink searches
/// seeded at every component and every customer. `vehicles` gives the
/// right-hand side `k(S)`.
pub fn separate_capacity_sets(x: &[f64], n: usize, vehicles: &dyn Fn(&[usize]) -> i64, tol: f64) -> Vec<(Vec<usize>, f64)> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let viol = |s: &[usize]| capacity_violation(x, s, vehicles(s));
    let record = |s: &[usize], found: &mut BTreeSet<Vec<usize>>| {
        if viol(s) > tol {
            let mut s = s.to_vec();
            s.sort_unstable();
            found.insert(s);
        }
    };
    let comps = support_components(x, n);
    let mut seeds: Vec<Vec<usize>> = comps.clone();
    seeds.extend((1..=n).map(|v| vec![v]));
    for comp in &comps {
        record(comp, &mut found);
    }
    for seed in seeds {
        let grown = grow(x, n, seed, &viol, tol, &mut |s| record(s, &mut found));
        for s in grown {
            let shrunk = shrink(s, &viol);
            record(&shrunk, &mut found);
        }
    }
    let mut out: Vec<(Vec<usize>, f64)> = found.into_iter().map(|s| {
        let v = viol(&s);
        (s, v)
    }).collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out.truncate(MAX_SETS);
    out
}

fn grow(
    x: &[f64],
    n: usize,
    mut set: Vec<usize>,
    viol: &dyn Fn(&[usize]) -> f64,
    tol: f64,
    record: &mut dyn FnMut(&[usize]),
) -> Vec<Vec<usize>> {
    let mut best = Vec::new();
    let mut best_viol = tol;
    loop {
        let current = viol(&set);
        if current > best_viol {
            best_viol = current;
            best = vec![set.clone()];
        }
        record(&set);
        let mut pick: Option<(usize, f64, f64)> = None;
        for v in 1..=n {
            if set.contains(&v) {
                continue;
            }
            let link: f64 = set.iter().map(|&u| x[edge_index(u, v)]).sum();
            if link <= SUPPORT_TOL {
                continue;
            }
            set.push(v);
            let gain = viol(&set);
            set.pop();
            let better = pick.is_none_or(|(_, g, l)| gain > g + 1e-12 || (gain > g - 1e-12 && link > l + 1e-12));
            if better {
                pick = Some((v, gain, link));
            }
        }
        match pick {
            Some((v, _, _)) => set.push(v),
            None => break,
        }
    }
    best
}

fn shrink(mut set: Vec<usize>, viol: &dyn Fn(&[usize]) -> f64) -> Vec<usize> {
    loop {
        let current = viol(&set);
        let mut improved = false;
        for i in 0..set.len() {
            if set.len() == 1 {
                break;
            }
            let v = set.remove(i);
            if viol(&set) > current + 1e-12 {
                improved = true;
                break;
            }
            set.insert(i, v);
        }
        if !improved {
            return set;
        }
    }
}

/// Rounded capacity inequalities for an explicit integer demand vector.
pub fn separate_rci(x: &[f64], demand: &[i64], capacity: i64, tol: f64) -> Vec<Vec<usize>> {
    let n = demand.len() - 1;
    let vehicles = |s: &[usize]| ceil_div(s.iter().map(|&v| demand[v]).sum(), capacity);
    separate_capacity_sets(x, n, &vehicles, tol).into_iter().map(|(s, _)| s).collect()
}
