//! Seed handling. Every random draw in the crate goes through here.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator identifier recorded in run metadata.
pub const PRNG_NAME: &str = "ChaCha8Rng/seed_from_u64";

/// Offset added to a seed for the single retry after a degenerate draw.
pub const REDRAW_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the `index`-th bisection of a run started from `seed`:
/// `splitmix64(seed ^ splitmix64(index))`.
pub fn bisection_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}
