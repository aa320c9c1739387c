//! Seeded randomness: every stochastic operation in the workspace takes an
//! explicit generator, so runs are reproducible from a single u64 seed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// The workspace-wide generator. ChaCha12 is deterministic across
/// platforms and fast enough for every sampling loop here.
pub type DefaultRng = ChaCha12Rng;

/// Build the generator for a seed.
pub fn rng_from_seed(seed: u64) -> DefaultRng {
    DefaultRng::seed_from_u64(seed)
}

/// Derive an independent child seed for a labelled subtask (per-round,
/// per-thread, per-sweep-point) without correlating the streams.
/// SplitMix64 finalizer over root + (index+1)·golden-ratio increment.
pub fn child_seed(root: u64, index: u64) -> u64 {
    let mut z = root.wrapping_add((index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
