//! Stable seed derivation.
//!
//! Every replicate, candidate and experiment task gets its own RNG seed
//! derived from a master seed with SplitMix64 finalizer rounds:
//!
//! ```text
//! derive_seed(base, stream, index) = mix(mix(mix(base) ^ stream) ^ index)
//! mix(z) = splitmix64 output function applied to z + 0x9E3779B97F4A7C15
//! ```
//!
//! The function is pure integer arithmetic, so seeds are identical on every
//! platform and independent of evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG used by every stochastic component.
pub type SimRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed for item `index` of stream `stream` under `base`.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    mix(mix(mix(base) ^ stream) ^ index)
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
