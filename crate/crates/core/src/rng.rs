//! Random streams and seed derivation.
//!
//! Every trajectory draws from a single [`ChaCha8Rng`] keyed by its 64-bit
//! seed through `SeedableRng::seed_from_u64`. Uniforms are the standard
//! 53-bit `f64` samples in `[0, 1)`. Bit-reproducibility is guaranteed
//! within one build; the step log format carries trajectories across builds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The generator behind every trajectory.
pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}

#[inline]
pub fn uniform(rng: &mut StreamRng) -> f64 {
    rng.random::<f64>()
}

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a master seed and a path of indices.
///
/// `h = splitmix64(master)`, then for each index `k` in order
/// `h = splitmix64(h ^ k * 0x9E3779B97F4A7C15)`. The result depends only on
/// the master seed and the index path, never on scheduling order.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |h, &k| {
        splitmix64(h ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    })
}
