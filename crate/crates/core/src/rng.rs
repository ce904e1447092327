//! Seed handling. Every stochastic operation takes an explicit generator;
//! this module only fixes the generator type and derives sub-streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used everywhere in the crate. ChaCha output is stable across
/// platforms and crate versions, so seeded runs are bit-reproducible.
pub type SimRng = ChaCha8Rng;

pub fn from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Derive an independent stream for a labelled sub-task (a sweep cell, a
/// trace input, ...) so results do not depend on scheduling order.
pub fn derive(seed: u64, labels: &[u64]) -> SimRng {
    let mut h = splitmix64(seed);
    for &label in labels {
        h = splitmix64(h ^ splitmix64(label.wrapping_add(0x632b_e59b_d9b4_e019)));
    }
    SimRng::seed_from_u64(h)
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
