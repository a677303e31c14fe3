//! Seeded per-sample random streams.
//!
//! Every Monte Carlo sample draws from its own ChaCha8 stream selected by
//! the sample index, so an ensemble depends only on the master seed and
//! never on how samples are split between workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Recorded in experiment metadata.
pub const RNG_ALGORITHM: &str =
    "ChaCha8 (rand_chacha 0.9), seed_from_u64(seed), stream = sample index";

pub type SampleRng = ChaCha8Rng;

/// Generator for sample `index` of the ensemble seeded by `seed`.
pub fn sample_rng(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn draw(seed: u64, index: u64) -> Vec<u64> {
        let mut rng = sample_rng(seed, index);
        (0..4).map(|_| rng.random()).collect()
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        assert_eq!(draw(7, 3), draw(7, 3));
        assert_ne!(draw(7, 3), draw(7, 4));
        assert_ne!(draw(7, 3), draw(8, 3));
    }
}
