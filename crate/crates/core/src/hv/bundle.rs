use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::binary::BinaryHv;
use super::check_dims;
use crate::error::{Error, Result};
use crate::rng;

/// How a majority threshold resolves components where exactly half of the
/// operands are 1. Ties only occur for an even operand count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TiePolicy {
    FavorZero,
    FavorOne,
    /// Bundle the operands together with one extra random hypervector drawn
    /// from `seed`. For an even count the extra vector decides exactly the
    /// tied components; for an odd count it is not added.
    RandomExtraVector { seed: u64 },
}

impl TiePolicy {
    pub const DEFAULT_SEED: u64 = 0x7469_6562_7265_616b;
}

impl Default for TiePolicy {
    fn default() -> Self {
        TiePolicy::RandomExtraVector {
            seed: Self::DEFAULT_SEED,
        }
    }
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TiePolicy::FavorZero => f.write_str("favor-zero"),
            TiePolicy::FavorOne => f.write_str("favor-one"),
            TiePolicy::RandomExtraVector { seed } => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for TiePolicy {
    type Err = Error;

    /// Accepts `favor-zero`, `favor-one`, `random` or `random:<seed>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "favor-zero" | "zero" => Ok(TiePolicy::FavorZero),
            "favor-one" | "one" => Ok(TiePolicy::FavorOne),
            "random" => Ok(TiePolicy::default()),
            other => other
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(|seed| TiePolicy::RandomExtraVector { seed })
                .ok_or_else(|| Error::InvalidParameter(format!("unknown tie policy {other:?}"))),
        }
    }
}

/// Running per-component count of 1-bits over the operands added so far.
///
/// Merging two accumulators is a componentwise sum, so partial accumulators
/// built by separate workers combine in any order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accumulator {
    counts: Vec<i32>,
    n: u32,
}

impl Accumulator {
    pub fn new(dim: usize) -> Self {
        Self {
            counts: vec![0; dim],
            n: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    /// Number of operands accumulated.
    pub fn len(&self) -> u32 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Per-component count of 1-bits, each in `[0, len()]`.
    pub fn counts(&self) -> &[i32] {
        &self.counts
    }

    /// The same sums seen through the bipolar mapping (bit 0 ↦ +1, bit 1 ↦ −1):
    /// `len() - 2 * count`, each in `[-len(), len()]`.
    pub fn bipolar_sums(&self) -> Vec<i32> {
        let n = self.n as i32;
        self.counts.iter().map(|&c| n - 2 * c).collect()
    }

    fn bump(&mut self, by: u32) -> Result<()> {
        self.n = self
            .n
            .checked_add(by)
            .filter(|&n| n <= i32::MAX as u32)
            .ok_or(Error::AccumulatorOverflow)?;
        Ok(())
    }

    pub fn add(&mut self, hv: &BinaryHv) -> Result<()> {
        check_dims(self.dim(), hv.dim())?;
        self.bump(1)?;
        for (chunk, &word) in self.counts.chunks_mut(64).zip(hv.words()) {
            for (b, c) in chunk.iter_mut().enumerate() {
                *c += ((word >> b) & 1) as i32;
            }
        }
        Ok(())
    }

    /// Resets to the empty state, keeping the allocation.
    pub fn clear(&mut self) {
        self.counts.fill(0);
        self.n = 0;
    }

    pub fn merge(&mut self, other: &Accumulator) -> Result<()> {
        check_dims(self.dim(), other.dim())?;
        self.bump(other.n)?;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    /// Majority threshold: 1 where more than half the operands are 1, ties per `policy`.
    pub fn threshold(&self, policy: TiePolicy) -> Result<BinaryHv> {
        if self.n == 0 {
            return Err(Error::EmptyAccumulator);
        }
        let dim = self.dim();
        let n = i64::from(self.n);
        let extra = match policy {
            TiePolicy::RandomExtraVector { seed } if n % 2 == 0 => {
                Some(BinaryHv::from_words_unchecked(dim, rng::random_words(seed, rng::TIE_STREAM, dim)))
            }
            _ => None,
        };
        let mut out = BinaryHv::zeros(dim);
        for (i, &c) in self.counts.iter().enumerate() {
            let twice = 2 * i64::from(c);
            let bit = match twice.cmp(&n) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => match (policy, &extra) {
                    (TiePolicy::FavorZero, _) => false,
                    (TiePolicy::FavorOne, _) => true,
                    (TiePolicy::RandomExtraVector { .. }, Some(extra)) => extra.get(i),
                    (TiePolicy::RandomExtraVector { .. }, None) => unreachable!("ties need an even count"),
                },
            };
            if bit {
                out.set(i, true);
            }
        }
        Ok(out)
    }
}

/// Bundling: componentwise majority of the operands.
pub fn bundle<'a, I>(operands: I, policy: TiePolicy) -> Result<BinaryHv>
where
    I: IntoIterator<Item = &'a BinaryHv>,
{
    let mut iter = operands.into_iter().peekable();
    let first = iter.peek().ok_or(Error::EmptyBundle)?;
    let mut acc = Accumulator::new(first.dim());
    for hv in iter {
        acc.add(hv)?;
    }
    acc.threshold(policy)
}
