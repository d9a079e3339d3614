use super::RecourseError;
use crate::model::{Instance, Route};

/// Whether `y` (aligned with the route's customers) unloads often enough:
/// `C·(y(R') + 1) ≥ d(R')` for every contiguous subroute `R'`.
pub fn is_recourse_action(inst: &Instance, route: &Route, scenario: usize, y: &[i64]) -> Result<bool, RecourseError> {
    if y.iter().any(|&v| v < 0) {
        return Err(RecourseError::NegativeEntry);
    }
    let seq = route.customers();
    let c = inst.capacity();
    let mut ok = true;
    'outer: for i in 0..seq.len() {
        let (mut demand, mut unloads) = (0, 0);
        for j in i..seq.len() {
            demand += inst.demand(scenario, seq[j]);
            unloads += y[j];
            if c * (unloads + 1) < demand {
                ok = false;
                break 'outer;
            }
        }
    }
    debug_assert_eq!(
        ok,
        crate::oracles::maxflow_membership(inst, route, scenario, y),
        "subroute test and flow test disagree on {route:?} / {y:?}"
    );
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    fn inst(d: Vec<i64>) -> Instance {
        let n = d.len();
        let cost = (0..=n).map(|i| (0..=n).map(|j| i64::from(i != j)).collect()).collect();
        Instance::new("m", cost, 10, None, vec![d], vec![num::rational::BigRational::one()]).unwrap()
    }

    #[test]
    fn spec_examples() {
        let inst = inst(vec![4, 4, 4, 3]);
        let r = Route::new(vec![1, 2, 3, 4]).unwrap();
        assert!(is_recourse_action(&inst, &r, 0, &[0, 0, 1, 0]).unwrap());
        assert!(!is_recourse_action(&inst, &r, 0, &[1, 0, 0, 0]).unwrap());
        assert!(is_recourse_action(&inst, &r.reversed(), 0, &[0, 1, 0, 0]).unwrap());
        assert_eq!(is_recourse_action(&inst, &r, 0, &[-1, 0, 0, 0]), Err(RecourseError::NegativeEntry));
    }

    #[test]
    fn zero_policy_on_light_route() {
        let inst = inst(vec![2, 3, 4]);
        let r = Route::new(vec![3, 1, 2]).unwrap();
        assert!(is_recourse_action(&inst, &r, 0, &[0, 0, 0]).unwrap());
    }
}
