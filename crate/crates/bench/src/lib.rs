//! Fixed-seed fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vrpsd_core::generate::{generate, random_route_case, GeneratorConfig};
use vrpsd_core::{Instance, Route};

pub const SEED: u64 = 7;

/// `count` random routes of length `len`, each in its own instance.
pub fn route_cases(count: usize, len: usize, scenarios: usize) -> Vec<(Instance, Route)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count).map(|_| random_route_case(&mut rng, len, scenarios, 10).unwrap()).collect()
}

/// Generated instance with enough demand variance for routes to fail.
pub fn instance(customers: usize, scenarios: usize) -> Instance {
    let cfg = GeneratorConfig { spread: Some(5), ..GeneratorConfig::new(customers, scenarios, 15, SEED) };
    generate(&cfg).unwrap()
}
