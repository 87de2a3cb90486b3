//! Reproducible random streams.
//!
//! Every random decision in the crate draws from a [`RngStream`], a
//! `(seed, stream)` pair backed by ChaCha8. Work items derive child streams
//! from their own identity (repetition index, random-start index, ...) so the
//! sample sequence never depends on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5EED_0DE1_2024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub const fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Child stream identified by `tag`. Distinct tags give independent
    /// streams; the mapping is a pure function of `(self, tag)`.
    pub fn derive(&self, tag: u64) -> RngStream {
        let seed = splitmix64(self.seed ^ splitmix64(self.stream.wrapping_add(0xA5A5_5A5A)));
        RngStream {
            seed: splitmix64(seed ^ tag.rotate_left(17)),
            stream: tag,
        }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

impl Default for RngStream {
    fn default() -> Self {
        RngStream::new(DEFAULT_SEED, 0)
    }
}
