//! Splittable seeded randomness.
//!
//! Every random choice in this crate flows from one explicit `u64` seed
//! through a tree of [`SeedStream`]s. A stream is identified by a 32-byte
//! key; `child(i)` derives an independent stream by hashing the parent key
//! with the index, and draws come from a ChaCha12 keystream under the key.
//! Two runs with the same seed therefore make bit-identical choices on any
//! platform, and sibling streams can be consumed in any order (or in
//! parallel) without affecting one another.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use sha2::{Digest, Sha256};

/// One node of the seed tree. Cloning preserves the draw position.
#[derive(Clone, Debug)]
pub struct SeedStream {
    key: [u8; 32],
    rng: ChaCha12Rng,
}

impl SeedStream {
    /// Root stream of the tree for a user-facing seed.
    pub fn root(seed: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"had-seed-root");
        h.update(seed.to_le_bytes());
        Self::from_key(h.finalize().into())
    }

    fn from_key(key: [u8; 32]) -> Self {
        SeedStream {
            key,
            rng: ChaCha12Rng::from_seed(key),
        }
    }

    /// Derive the `index`-th child stream. Independent of the parent's draw
    /// position and of every sibling.
    pub fn child(&self, index: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"had-seed-child");
        h.update(self.key);
        h.update(index.to_le_bytes());
        Self::from_key(h.finalize().into())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw in `[0, bound)` by Lemire's multiply-shift rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below(0)");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let r = self.next_u64();
            let m = (r as u128) * (bound as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// Uniform draw in `[1, bound)`.
    pub fn below_nonzero(&mut self, bound: u64) -> u64 {
        assert!(bound > 1, "no nonzero residue below {bound}");
        1 + self.below(bound - 1)
    }
}
