//! Counter-based random bit generation.
//!
//! Every random stream is keyed by `(seed, stream)`; ChaCha's internal block
//! counter walks the component blocks, so a hypervector's bits depend only on
//! its key and never on the order in which vectors are requested.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::RngCore;

/// Stream reserved for the tie-breaking vector of [`crate::TiePolicy::RandomExtraVector`].
pub(crate) const TIE_STREAM: u64 = u64::MAX;

pub(crate) fn keyed_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `ceil(dim / 64)` words of uniform bits; padding bits above `dim` cleared.
pub(crate) fn random_words(seed: u64, stream: u64, dim: usize) -> Vec<u64> {
    let mut rng = keyed_rng(seed, stream);
    let n = dim.div_ceil(64);
    let mut words: Vec<u64> = (0..n).map(|_| rng.next_u64()).collect();
    let tail = dim % 64;
    if tail != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << tail) - 1;
        }
    }
    words
}

/// 64-bit FNV-1a; stable across platforms and toolchains.
pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
