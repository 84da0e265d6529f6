//! Seeded random streams.
//!
//! Every stochastic routine takes an explicit `&mut SimRng`. Independent work
//! items (shots, benchmark instances) get their own stream from
//! [`stream`], so results do not depend on execution order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used throughout the crate.
pub type SimRng = ChaCha8Rng;

/// Purpose tags mixed into derived seeds so that, for one shot, the
/// preparation and circuit streams never coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Prep = 1,
    Circuit = 2,
    Instance = 3,
    Analog = 4,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Split function: seed of stream `(purpose, index)` under `master`.
///
/// `split(m, p, i) = sm(sm(sm(m) ^ p) ^ i)` where `sm` is the SplitMix64
/// finaliser.
pub fn split(master: u64, purpose: Stream, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ purpose as u64) ^ index)
}

/// Generator for stream `(purpose, index)` under `master`.
pub fn stream(master: u64, purpose: Stream, index: u64) -> SimRng {
    SimRng::seed_from_u64(split(master, purpose, index))
}

pub fn from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}
