//! Affine activation functions: 1 on the targeted integer plans, at most 0 on
//! every other integer point.

use super::cut::AffineForm;
use crate::model::{Edge, PartialRoute, Route};
use crate::rational::int;

/// Partial-route activation: 1 on plans with a subroute adhering to `h`.
///
/// `1 + (x(H) − |V+(H)| + 1) + Σ_{i∈{2,ℓ−1}} (x(E(S_i)) − |S_i| + 1)` with
/// `x(H) = Σ_i x(E(S_i)) + Σ_i x(E(S_i, S_{i+1}))` and 1-based `i`.
pub fn activation_wof(h: &PartialRoute) -> AffineForm {
    let one = int(1);
    let sets = h.sets();
    let l = sets.len();
    let mut form = AffineForm::constant(int(2 - h.customers().len() as i64));
    for s in sets {
        form.add_inner(s, &one);
    }
    for w in sets.windows(2) {
        form.add_cross(&w[0], &w[1], &one);
    }
    let mut extra: Vec<usize> = [2, l.saturating_sub(1)].into_iter().filter(|&i| i >= 1 && i <= l).collect();
    extra.dedup();
    for i in extra {
        let s = &sets[i - 1];
        form.add_inner(s, &one);
        form.constant += int(1 - s.len() as i64);
    }
    form
}

/// Set activation `1 + x(E(S)) − |S| + k'`.
pub fn activation_wdl(set: &[usize], k_prime: i64) -> AffineForm {
    let mut form = AffineForm::constant(int(1 - set.len() as i64 + k_prime));
    form.add_inner(set, &int(1));
    form
}

/// Path activation `1 + Σ_{internal e}(x_e − 1)`: 1 whenever `route` is a
/// contiguous piece of some route.
pub fn activation_path(route: &Route) -> AffineForm {
    activation_wof(&PartialRoute::from_route(route))
}

/// 1 only when `route` is itself a complete route of the plan.
pub fn activation_route(route: &Route) -> AffineForm {
    let c = route.customers();
    let l = c.len();
    let one = int(1);
    match l {
        1 => {
            let mut f = AffineForm::constant(int(-1));
            f.add_edge(Edge::new(0, c[0]), &one);
            f
        }
        _ => {
            let internal_weight = if l == 2 { int(3) } else { int(2) };
            let mut f = AffineForm::constant(int(1) - &internal_weight * int(l as i64 - 1) - int(2));
            for w in c.windows(2) {
                f.add_edge(Edge::new(w[0], w[1]), &internal_weight);
            }
            f.add_edge(Edge::new(0, c[0]), &one);
            f.add_edge(Edge::new(0, c[l - 1]), &one);
            f
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{edge_count, RoutingPlan};

    fn plan(n: usize, routes: &[&[usize]]) -> Vec<u8> {
        let routes = routes.iter().map(|r| Route::new(r.to_vec()).unwrap()).collect();
        RoutingPlan::from_routes(n, routes).unwrap().x().to_vec()
    }

    #[test]
    fn wof_examples() {
        let h = PartialRoute::new(vec![vec![1], vec![2, 3]]).unwrap();
        let f = activation_wof(&h);
        assert_eq!(f.eval_exact(&plan(4, &[&[1, 2, 3, 4]])), int(1));
        assert_eq!(f.eval_exact(&plan(4, &[&[1, 3, 2], &[4]])), int(1));
        assert!(f.eval_exact(&plan(4, &[&[2, 1, 3], &[4]])) <= int(0));
        let single = PartialRoute::new(vec![vec![2]]).unwrap();
        assert_eq!(activation_wof(&single).eval_exact(&plan(3, &[&[2], &[1, 3]])), int(1));
    }

    #[test]
    fn wdl_examples() {
        let f = activation_wdl(&[1, 2, 3], 1);
        assert_eq!(f.eval_exact(&plan(3, &[&[1, 2, 3]])), int(1));
        assert_eq!(f.eval_exact(&plan(3, &[&[1, 2], &[3]])), int(0));
        let mut x = vec![0.0; edge_count(3)];
        x[Edge::new(1, 2).index()] = 1.0;
        x[Edge::new(2, 3).index()] = 1.3;
        assert!((f.eval(&x) - 1.3).abs() < 1e-12);
    }

    #[test]
    fn route_activation_targets_whole_routes() {
        let r = Route::new(vec![1, 2, 3]).unwrap();
        let f = activation_route(&r);
        assert_eq!(f.eval_exact(&plan(4, &[&[1, 2, 3], &[4]])), int(1));
        assert!(f.eval_exact(&plan(4, &[&[1, 2, 3, 4]])) <= int(0));
        assert!(f.eval_exact(&plan(4, &[&[4, 1, 2, 3]])) <= int(0));
        let two = activation_route(&Route::new(vec![1, 2]).unwrap());
        assert_eq!(two.eval_exact(&plan(3, &[&[2, 1], &[3]])), int(1));
        assert!(two.eval_exact(&plan(3, &[&[1, 2, 3]])) <= int(0));
        let one = activation_route(&Route::new(vec![3]).unwrap());
        assert_eq!(one.eval_exact(&plan(3, &[&[1, 2], &[3]])), int(1));
        assert!(one.eval_exact(&plan(3, &[&[1, 3], &[2]])) <= int(0));
    }
}
