//! Seeded random streams.
//!
//! Every stream is ChaCha8 (a counter-based generator) keyed by
//! `ChaCha8Rng::seed_from_u64(seed)` and selected with `set_stream(id)`.
//! A reimplementation using the same key expansion and stream ids
//! reproduces the streams exactly; the statistical tests do not rely on it.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream ids are `2·trial + purpose`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purpose {
    Training = 0,
    Test = 1,
}

pub fn stream(seed: u64, id: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

pub fn trial_stream(seed: u64, trial: u64, purpose: Purpose) -> StreamRng {
    stream(seed, trial.wrapping_mul(2).wrapping_add(purpose as u64))
}

const DERIVE_TAG: u64 = 0x6d64_6c65_6172_6e31;

/// Independent child seed `index` of `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    stream(base ^ DERIVE_TAG, index).next_u64()
}
