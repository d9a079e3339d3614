//! Seeded random instances on an integer grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{rounded_euclidean, Instance, ModelError};
use crate::rational::{int, ratio, Rat};

pub const GRID: i64 = 100;

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("need at least one customer and one scenario")]
    Empty,
    #[error("capacity must be at least 3")]
    Capacity,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub customers: usize,
    pub scenarios: usize,
    pub capacity: i64,
    /// Scenario demands are drawn from `mean ± spread`, clipped to `[0, C]`.
    /// Defaults to `C / 4` when `None`.
    pub spread: Option<i64>,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(customers: usize, scenarios: usize, capacity: i64, seed: u64) -> Self {
        GeneratorConfig { customers, scenarios, capacity, spread: None, seed }
    }
}

/// Depot at the grid centre, customers uniform on the grid, rounded Euclidean
/// costs, per-customer means in `[1, C/3]`, equiprobable scenarios and the
/// fleet size first-fit-decreasing needs for the expected demands.
pub fn generate(cfg: &GeneratorConfig) -> Result<Instance, GenerateError> {
    if cfg.customers == 0 || cfg.scenarios == 0 {
        return Err(GenerateError::Empty);
    }
    if cfg.capacity < 3 {
        return Err(GenerateError::Capacity);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let c = cfg.capacity;
    let spread = cfg.spread.unwrap_or(c / 4).max(0);
    let mut coords = vec![[GRID / 2, GRID / 2]];
    for _ in 0..cfg.customers {
        coords.push([rng.gen_range(0..=GRID), rng.gen_range(0..=GRID)]);
    }
    let means: Vec<i64> = (0..cfg.customers).map(|_| rng.gen_range(1..=c / 3)).collect();
    let demands: Vec<Vec<i64>> = (0..cfg.scenarios)
        .map(|_| {
            means
                .iter()
                .map(|&m| rng.gen_range((m - spread)..=(m + spread)).clamp(0, c))
                .collect()
        })
        .collect();
    let probs = vec![ratio(1, cfg.scenarios as i64); cfg.scenarios];
    let expected: Vec<Rat> = (0..cfg.customers)
        .map(|v| demands.iter().map(|row| int(row[v])).sum::<Rat>() / int(cfg.scenarios as i64))
        .collect();
    let fleet = first_fit_decreasing(&expected, &int(c));
    let name = format!("gen-n{}-N{}-C{}-s{}", cfg.customers, cfg.scenarios, c, cfg.seed);
    Ok(Instance::new(name, rounded_euclidean(&coords), c, Some(fleet), demands, probs)?)
}

/// Number of bins first-fit-decreasing opens for `sizes` (at least 1).
pub fn first_fit_decreasing(sizes: &[Rat], capacity: &Rat) -> usize {
    let mut sorted = sizes.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    let mut bins: Vec<Rat> = Vec::new();
    for s in sorted {
        match bins.iter_mut().find(|load| &(&**load + &s) <= capacity) {
            Some(load) => *load += s,
            None => bins.push(s),
        }
    }
    bins.len().max(1)
}


/// A single route over customers `1..=len` of a fresh instance with
/// `scenarios` equiprobable demand vectors in `[0, capacity]`, in a shuffled
/// visiting order.
pub fn random_route_case<R: Rng>(
    rng: &mut R,
    len: usize,
    scenarios: usize,
    capacity: i64,
) -> Result<(Instance, crate::model::Route), GenerateError> {
    if len == 0 || scenarios == 0 {
        return Err(GenerateError::Empty);
    }
    let mut coords = vec![[GRID / 2, GRID / 2]];
    coords.extend((0..len).map(|_| [rng.gen_range(0..=GRID), rng.gen_range(0..=GRID)]));
    let demands: Vec<Vec<i64>> =
        (0..scenarios).map(|_| (0..len).map(|_| rng.gen_range(0..=capacity)).collect()).collect();
    let probs = vec![ratio(1, scenarios as i64); scenarios];
    let inst = Instance::new("route", rounded_euclidean(&coords), capacity, None, demands, probs)?;
    let mut order: Vec<usize> = (1..=len).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), rng);
    Ok((inst, crate::model::Route::new(order)?))
}
