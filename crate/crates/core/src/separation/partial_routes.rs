use std::collections::BTreeSet;

use crate::model::{edge_index, PartialRoute};

pub const STRONG_EDGE: f64 = 0.9;
pub const WEAK_EDGE: f64 = 0.1;

/// Depot-anchored partial routes read off a (possibly fractional) edge vector.
///
/// Strong edges (`x_e ≥ 0.9`) extend the walk by a singleton. When the last
/// singleton has no strong continuation, the cluster reachable through
/// fractional edges (`0.1 < x_e < 0.9`) becomes the next set, and the walk may
/// then continue only along a strong connection into that set. On integer
/// points this returns every route as an all-singleton partial route.
pub fn extract_partial_routes(x: &[f64], n: usize) -> Vec<PartialRoute> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for start in 1..=n {
        if x[edge_index(0, start)] < STRONG_EDGE {
            continue;
        }
        let Some(h) = walk(x, n, start) else { continue };
        let canon = h.canonical();
        if seen.insert(canon.sets().to_vec()) {
            out.push(canon);
        }
    }
    out
}

fn walk(x: &[f64], n: usize, start: usize) -> Option<PartialRoute> {
    let mut visited = vec![false; n + 1];
    visited[start] = true;
    let mut sets: Vec<Vec<usize>> = vec![vec![start]];
    loop {
        let last = sets.last().unwrap();
        let strong = |from: &[usize], visited: &[bool]| {
            (1..=n)
                .filter(|&w| !visited[w])
                .map(|w| (w, from.iter().map(|&u| x[edge_index(u, w)]).sum::<f64>()))
                .filter(|&(_, v)| v >= STRONG_EDGE)
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
                .map(|(w, _)| w)
        };
        if let Some(w) = strong(last, &visited) {
            visited[w] = true;
            sets.push(vec![w]);
            continue;
        }
        if last.len() > 1 {
            break;
        }
        let cluster = fractional_cluster(x, n, last[0], &visited);
        if cluster.is_empty() {
            break;
        }
        for &w in &cluster {
            visited[w] = true;
        }
        sets.push(cluster);
    }
    PartialRoute::new(sets).ok()
}

fn fractional_cluster(x: &[f64], n: usize, from: usize, visited: &[bool]) -> Vec<usize> {
    let weak = |u: usize, w: usize| {
        let v = x[edge_index(u, w)];
        v > WEAK_EDGE && v < STRONG_EDGE
    };
    let mut cluster: Vec<usize> = (1..=n).filter(|&w| !visited[w] && w != from && weak(from, w)).collect();
    let mut i = 0;
    while i < cluster.len() {
        let u = cluster[i];
        for w in 1..=n {
            if !visited[w] && w != from && w != u && !cluster.contains(&w) && weak(u, w) {
                cluster.push(w);
            }
        }
        i += 1;
    }
    cluster.sort_unstable();
    cluster
}
