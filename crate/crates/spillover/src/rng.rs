//! Deterministic seeding. Every randomized stage derives its generator from
//! (master seed, domain, stream) so draw i is the same no matter how many
//! threads compute it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stage labels; keep values stable, they are part of run reproducibility.
pub mod domain {
    pub const POSTERIOR: u64 = 1;
    pub const ROTATION_DRAWS: u64 = 2;
    pub const DGP: u64 = 3;
    pub const ROTATION_POSTERIOR: u64 = 4;
}

/// SplitMix64; mixes a seed with a domain label into a fresh 64-bit seed.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, domain: u64) -> u64 {
    splitmix64(master ^ splitmix64(domain))
}

/// Counter-based substream: same (seed, stream) always yields the same
/// generator, independent of which thread asks for it.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
