//! Seedable, splittable random streams.
//!
//! Every sampling routine takes a `RandomStream` explicitly. A stream is a
//! ChaCha8 generator keyed by a 64-bit seed and a 64-bit stream id, so
//! `(seed, index)` pairs give independent substreams whose output does not
//! depend on how trials are scheduled across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Substream `index` of `seed`.
    pub fn derive(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RandomStream { rng }
    }

    /// Splits off an independent child stream, advancing `self`.
    pub fn split(&mut self) -> Self {
        let mut key = [0u8; 32];
        self.rng.fill_bytes(&mut key);
        RandomStream {
            rng: ChaCha8Rng::from_seed(key),
        }
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
