//! Hypervector representations and the three HD operations.
//!
//! Binary hypervectors are bit-packed into `u64` words, little-endian within a
//! word: component `i` lives in bit `i % 64` of word `i / 64`. Bits above the
//! dimension in the last word are always zero.

mod binary;
mod bundle;
mod dense;
mod similarity;

pub use binary::BinaryHv;
pub use bundle::{bundle, Accumulator, TiePolicy};
pub use dense::{cosine, dot, BipolarHv, DenseVector, TernaryHv};
pub use similarity::{Metric, Similarity};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Smallest dimension an [`HvSpace`] accepts.
pub const MIN_DIM: usize = 8;

/// A fixed dimension plus the seed that generates every random hypervector
/// drawn from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HvSpace {
    dim: usize,
    seed: u64,
}

impl HvSpace {
    pub fn new(dim: usize, seed: u64) -> Result<Self> {
        if dim < MIN_DIM {
            return Err(Error::DimensionTooSmall(dim));
        }
        Ok(Self { dim, seed })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The `index`-th random hypervector of this space.
    ///
    /// Bits are i.i.d. Bernoulli(1/2). The result is a pure function of
    /// `(seed, dim, index)`, so distinct indices are independent draws and
    /// generation order never matters.
    pub fn random_hv(&self, index: u64) -> BinaryHv {
        BinaryHv::from_words_unchecked(self.dim, rng::random_words(self.seed, index, self.dim))
    }

    /// Checks that `hv` belongs to this space.
    pub fn check(&self, hv: &BinaryHv) -> Result<()> {
        if hv.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: hv.dim(),
            });
        }
        Ok(())
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_tiny_dimension() {
        assert_eq!(HvSpace::new(7, 0), Err(Error::DimensionTooSmall(7)));
        assert!(HvSpace::new(8, 0).is_ok());
    }

    #[test]
    fn random_hv_is_deterministic() {
        let space = HvSpace::new(10_000, 42).unwrap();
        assert_eq!(space.random_hv(3), space.random_hv(3));
        // order independence
        let later = space.random_hv(7);
        let _ = space.random_hv(1);
        assert_eq!(later, HvSpace::new(10_000, 42).unwrap().random_hv(7));
    }

    #[test]
    fn neighbouring_indices_are_quasi_orthogonal() {
        let space = HvSpace::new(10_000, 42).unwrap();
        let h = space.random_hv(0).hamming(&space.random_hv(1)).unwrap().value;
        assert!((0.47..=0.53).contains(&h), "{h}");
    }

    #[test]
    fn mean_distance_over_random_pairs() {
        let space = HvSpace::new(10_000, 9).unwrap();
        let mean = (0..1000u64)
            .map(|i| {
                let a = space.random_hv(2 * i);
                let b = space.random_hv(2 * i + 1);
                a.hamming(&b).unwrap().value
            })
            .sum::<f64>()
            / 1000.0;
        assert!((mean - 0.5).abs() <= 0.005, "{mean}");
    }

    #[test]
    fn padding_is_clear_for_odd_dimensions() {
        for dim in [8, 63, 65, 100, 1000, 10_001] {
            let space = HvSpace::new(dim, 1).unwrap();
            assert!(space.random_hv(0).padding_is_clear());
        }
    }
}
