//! Per-replicate random streams.
//!
//! Each replicate gets its own ChaCha8 stream seeded with
//! `trial_seed(master, replicate)`, so replicates can run in any order or on
//! any thread and still draw the same numbers. ChaCha is counter-based and
//! its output is specified independently of platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replicate `replicate` under `master`.
pub fn trial_seed(master: u64, replicate: u64) -> u64 {
    mix64(master ^ mix64(replicate.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn stream(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn trial_stream(master: u64, replicate: u64) -> SimRng {
    stream(trial_seed(master, replicate))
}
