//! Seed handling. Every random stream in the crate is a `ChaCha8Rng`, so a
//! given seed produces the same draws on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type SimRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-stream of `seed`, keyed by a small stream id.
pub fn substream(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

pub(crate) const GRAPH_STREAM: u64 = 1;
pub(crate) const POPULATION_STREAM: u64 = 2;
pub(crate) const DYNAMICS_STREAM: u64 = 3;

/// Child seed for one realization of a named sweep coordinate.
///
/// Depends only on its arguments, never on the order in which coordinates
/// are visited.
pub fn derive_child_seed(base_seed: u64, coordinate: &str, realization: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(base_seed.to_le_bytes());
    h.update((coordinate.len() as u64).to_le_bytes());
    h.update(coordinate.as_bytes());
    h.update(realization.to_le_bytes());
    let digest = h.finalize();
    let mut first = [0u8; 8];
    first.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(first)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
