//! Seeded random streams.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`), whose output
//! is specified independently of platform and word size. A run is fixed by a
//! 64-bit seed; independent parts of a computation take separate substreams
//! of the same seed via ChaCha's 64-bit stream id:
//!
//! * the probabilistic grid selection uses stream `axis` for the lines
//!   parallel to that axis,
//! * generic projections use stream [`PROJECTION_STREAM`]` + attempt`,
//! * two-slit sampling uses stream [`TWO_SLIT_STREAM`],
//! * Monte Carlo trials derive a per-trial seed with [`trial_seed`].

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PROJECTION_STREAM: u64 = 1 << 32;
pub const TWO_SLIT_STREAM: u64 = 2 << 32;

pub type Stream = ChaCha8Rng;

pub fn substream(seed: u64, stream: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn next_u64(rng: &mut Stream) -> u64 {
    rng.next_u64()
}

/// Uniform integer in `[0, bound)` by rejection, `bound > 0`.
pub fn below(rng: &mut Stream, bound: u64) -> u64 {
    assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % bound;
        }
    }
}

/// Uniform integer in `[-r, r]`.
pub fn symmetric(rng: &mut Stream, r: u64) -> i64 {
    below(rng, 2 * r + 1) as i64 - r as i64
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of Monte Carlo trial `trial` for grid parameters `(k, n)`.
pub fn trial_seed(master: u64, k: usize, n: u32, trial: usize) -> u64 {
    mix64(mix64(mix64(master ^ k as u64) ^ u64::from(n)) ^ trial as u64)
}
