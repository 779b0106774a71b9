//! Seeded random streams.
//!
//! Every sampler takes a [`Stream`], which is a ChaCha8 generator keyed by a
//! user seed and selected by a 64-bit stream id. Two streams with different ids
//! never overlap, so replica `r` of an experiment can be rebuilt from
//! `(seed, r)` alone, whatever thread ran it.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream id offsets reserved for the different consumers of one replica.
pub mod lane {
    /// Letters X(1), X(2), ... of a forward window.
    pub const FORWARD: u64 = 0;
    /// Letters X(0), X(-1), ... read by the lazy left extension.
    pub const PAST: u64 = 1;
    /// An independent copy of the past, used by the approximate Markov check.
    pub const PAST_PRIME: u64 = 2;
    /// Auxiliary draws (rejection coins, uniform picks).
    pub const AUX: u64 = 3;
}

/// A reproducible random stream.
#[derive(Clone, Debug)]
pub struct Stream {
    rng: ChaCha8Rng,
}

impl Stream {
    /// Stream `id` under `seed`.
    pub fn new(seed: u64, id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(id);
        Stream { rng }
    }

    /// Stream for lane `lane` of replica `replica`.
    pub fn replica(seed: u64, replica: u64, lane: u64) -> Self {
        Stream::new(seed, replica.wrapping_mul(8).wrapping_add(lane))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on [0, 1) with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform on `1..=n`.
    #[inline]
    pub fn uniform_1_to(&mut self, n: u64) -> u64 {
        self.rng.gen_range(1..=n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_id_same_output() {
        let mut a = Stream::new(7, 3);
        let mut b = Stream::new(7, 3);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn lanes_differ() {
        let mut a = Stream::replica(7, 0, lane::FORWARD);
        let mut b = Stream::replica(7, 0, lane::PAST);
        assert_ne!(a.next_u64(), b.next_u64());
    }
}
