use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hv::{BinaryHv, HvSpace};
use crate::rng;

/// Everything needed to rebuild a [`ContinuousItemMemory`] from seeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelConfig {
    pub levels: usize,
    pub f_min: f64,
    pub f_max: f64,
    pub flip_seed: u64,
    /// Bits flipped between consecutive levels. `None` means `⌊d/m⌋`.
    pub flips_per_level: Option<usize>,
}

impl LevelConfig {
    pub fn new(levels: usize, f_min: f64, f_max: f64, flip_seed: u64) -> Self {
        Self {
            levels,
            f_min,
            f_max,
            flip_seed,
            flips_per_level: None,
        }
    }

    pub fn with_flips(mut self, flips: usize) -> Self {
        self.flips_per_level = Some(flips);
        self
    }

    /// Resolved flips per step for dimension `dim`.
    pub fn flips(&self, dim: usize) -> usize {
        self.flips_per_level.unwrap_or(dim / self.levels.max(1))
    }
}

/// Flip count that puts the extreme levels at distance ≈ 0.5:
/// `⌊d / (2(m−1))⌋`.
pub fn half_span_flips(dim: usize, levels: usize) -> usize {
    dim / (2 * (levels.max(2) - 1))
}

/// Level hypervectors `L_1 … L_m` for a scalar range.
///
/// `L_1` is random; each next level flips `flips` further positions taken,
/// without replacement, from one seeded shuffle of `0..d`. Consecutive levels
/// are therefore exactly `flips / d` apart and `Ham(L_1, L_i) = (i−1)·flips/d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousItemMemory {
    space: HvSpace,
    config: LevelConfig,
    levels: Vec<BinaryHv>,
}

impl ContinuousItemMemory {
    pub fn build(space: HvSpace, levels: usize, f_min: f64, f_max: f64, flip_seed: u64) -> Result<Self> {
        Self::from_config(space, LevelConfig::new(levels, f_min, f_max, flip_seed))
    }

    pub fn from_config(space: HvSpace, config: LevelConfig) -> Result<Self> {
        let m = config.levels;
        if m < 2 {
            return Err(Error::TooFewLevels(m));
        }
        if !(config.f_min.is_finite() && config.f_max.is_finite() && config.f_min < config.f_max) {
            return Err(Error::InvalidRange {
                min: config.f_min,
                max: config.f_max,
            });
        }
        let d = space.dim();
        let flips = config.flips(d);
        if flips.checked_mul(m - 1).is_none_or(|total| total > d) {
            return Err(Error::TooManyFlips {
                flips,
                steps: m - 1,
                dim: d,
            });
        }

        let mut order: Vec<usize> = (0..d).collect();
        order.shuffle(&mut rng::keyed_rng(config.flip_seed, 1));

        let first = BinaryHv::from_words_unchecked(d, rng::random_words(config.flip_seed, 0, d));
        let mut levels = Vec::with_capacity(m);
        levels.push(first);
        for step in 0..m - 1 {
            let mut next = levels[step].clone();
            for &pos in &order[step * flips..(step + 1) * flips] {
                next.flip(pos);
            }
            levels.push(next);
        }
        Ok(Self { space, config, levels })
    }

    pub fn space(&self) -> HvSpace {
        self.space
    }

    pub fn config(&self) -> &LevelConfig {
        &self.config
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn flips_per_level(&self) -> usize {
        self.config.flips(self.space.dim())
    }

    pub fn levels(&self) -> &[BinaryHv] {
        &self.levels
    }

    /// Zero-based level index of `v` (level `k` in 1-based terms is index `k−1`).
    ///
    /// `[f_min, f_max]` is split into `m` equal-width bins, each closed below;
    /// a value on an inner boundary lands in the upper bin and `f_max` itself
    /// lands in the top bin. Values outside the range are clamped.
    pub fn quantize(&self, v: f64) -> usize {
        let m = self.levels.len();
        let (lo, hi) = (self.config.f_min, self.config.f_max);
        let v = v.clamp(lo, hi);
        let scaled = (v - lo) / (hi - lo) * m as f64;
        // NaN casts to 0
        (scaled.floor() as usize).min(m - 1)
    }

    pub fn level(&self, index: usize) -> &BinaryHv {
        &self.levels[index]
    }

    pub fn get(&self, v: f64) -> &BinaryHv {
        &self.levels[self.quantize(v)]
    }
}
