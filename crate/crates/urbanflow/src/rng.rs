//! Seeded substream derivation.
//!
//! Every randomized stage draws from a [`ChaCha8Rng`] whose seed is derived
//! from one root seed plus a stage label (and optionally an item index).
//! Adding a new stage or reordering work never perturbs the stream another
//! stage sees.

use rand_chacha::rand_core::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Mix a root seed with a label into a new 64-bit seed (FNV-1a over the
/// label, then a splitmix64 finalizer).
pub fn derive_seed(root: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in label.as_bytes() {
        h ^= u64::from(*byte);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(root ^ h)
}

/// Derive a per-item seed, e.g. one substream per trip or per module.
pub fn derive_indexed_seed(root: u64, label: &str, index: u64) -> u64 {
    splitmix64(derive_seed(root, label) ^ splitmix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

/// Counter-based stream generator for a derived seed.
pub fn stream(root: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(root, label))
}

/// Counter-based stream generator for a derived per-item seed.
pub fn indexed_stream(root: u64, label: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_indexed_seed(root, label, index))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
