//! Counter-based sampling keyed by (seed, sample, site).

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn stream(seed: u64, sample: u64, site: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    rng.set_word_pos(u128::from(site) * 4);
    rng
}

/// Uniform draw in `[−1, 1)` for one (seed, sample, site) key.
pub fn uniform_symmetric(seed: u64, sample: u64, site: u64) -> f64 {
    let mut rng = stream(seed, sample, site);
    let u: f64 = rng.gen();
    2.0 * u - 1.0
}

/// Site offsets uniform in `[−amplitude, amplitude]·d`.
pub fn disorder_offsets(seed: u64, sample: u64, n: usize, amplitude: f64, d: f64) -> Vec<f64> {
    (0..n as u64).map(|i| amplitude * d * uniform_symmetric(seed, sample, i)).collect()
}

/// Raw 64-bit draw for one key.
pub fn raw(seed: u64, sample: u64, site: u64) -> u64 {
    stream(seed, sample, site).next_u64()
}
