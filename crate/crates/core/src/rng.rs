//! Seeded random number generation with a pinned, reproducible stream.
//!
//! The generator is ChaCha8 as implemented by `rand_chacha`, seeded through
//! `SeedableRng::seed_from_u64`. The algorithm, seeding scheme, and the
//! per-trial derivation below are fixed; identical seeds produce bit-identical
//! streams on every platform.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 step, used to mix a master seed with a stream index.
///
/// Derived seeds are `splitmix64(master ^ (index + 1) * 0x9E3779B97F4A7C15)`,
/// so stream 0 differs from the master stream itself.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent child seed from a master seed and a stream index.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// A deterministic random source owned by a single task.
///
/// Parallel work must not share one of these; give each concurrent unit its
/// own generator via [`SeededRng::derive`].
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The seed this generator was constructed with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A child generator for stream `index`, independent of `self`'s state.
    pub fn derive(&self, index: u64) -> Self {
        Self::new(derive_seed(self.seed, index))
    }

    /// One uniform draw from `[0, 1)` consuming exactly one 64-bit step.
    pub fn next_unit_f64(&mut self) -> f64 {
        // 53 explicit mantissa bits from a single u64, the standard conversion.
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`.
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    /// Fair coin flip.
    pub fn flip(&mut self) -> bool {
        self.inner.gen()
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}
