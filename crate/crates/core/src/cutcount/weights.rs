use rand::Rng;

use crate::seed;

/// Independent weights uniform in `[1, 2 |U|]` for a universe of size `|U|`.
pub fn sample_weights(universe: usize, seed: u64) -> Vec<u64> {
    sample_weights_in(universe, 2 * universe as u64, seed)
}

/// Independent weights uniform in `[1, max]`.
pub fn sample_weights_in(universe: usize, max: u64, seed: u64) -> Vec<u64> {
    let mut rng = seed::rng(seed);
    (0..universe).map(|_| rng.gen_range(1..=max.max(1))).collect()
}

/// True if exactly one set of `family` attains the minimum total weight.
pub fn isolates(family: &[Vec<usize>], weights: &[u64]) -> bool {
    let totals: Vec<u64> = family.iter().map(|s| s.iter().map(|&e| weights[e]).sum()).collect();
    match totals.iter().min() {
        Some(m) => totals.iter().filter(|&t| t == m).count() == 1,
        None => false,
    }
}
