//! Deterministic seed derivation.
//!
//! Every randomized component draws from a ChaCha8 stream derived from the
//! user seed and a list of context salts, so results are identical across
//! runs, platforms, and worker schedules.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Mixes `seed` with context salts into a derived 64-bit seed.
pub fn derive_seed(seed: u64, salts: &[u64]) -> u64 {
    let mut acc = splitmix64(seed);
    for &s in salts {
        acc = splitmix64(acc ^ splitmix64(s));
    }
    acc
}

/// Hashes a string into a salt for [`derive_seed`].
pub fn salt_of(label: &str) -> u64 {
    let mut acc = 0xcbf2_9ce4_8422_2325u64; // FNV-1a
    for b in label.bytes() {
        acc ^= b as u64;
        acc = acc.wrapping_mul(0x1000_0000_01b3);
    }
    acc
}

pub fn rng_from(seed: u64, salts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, salts))
}
