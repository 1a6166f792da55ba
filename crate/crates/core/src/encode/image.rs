//! HoloGN-style encoding of binary pixel grids.

use crate::error::{Error, Result};
use crate::hv::{Accumulator, BinaryHv, TiePolicy};
use crate::memory::ItemMemory;

/// A row-major grid of 0/1 pixels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PixelGrid {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl PixelGrid {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyInput("pixel grid"));
        }
        if pixels.len() != width * height {
            return Err(Error::InputTooShort {
                needed: width * height,
                found: pixels.len(),
            });
        }
        if let Some(index) = pixels.iter().position(|&p| p > 1) {
            return Err(Error::NonBinaryPixel {
                index,
                value: pixels[index],
            });
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    /// Copy with pixel `i` inverted.
    pub fn with_flipped(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.pixels[i] ^= 1;
        out
    }
}

pub fn pixel_symbol(j: usize) -> String {
    format!("px_{j}")
}

/// Bundles, over all pixels `j`, the index vector `px_j` rotated by the pixel value.
pub fn encode_pixels_hologn(grid: &PixelGrid, im: &ItemMemory, policy: TiePolicy) -> Result<BinaryHv> {
    let mut acc = Accumulator::new(im.dim());
    for (j, &p) in grid.pixels().iter().enumerate() {
        acc.add(&im.get(&pixel_symbol(j)).permute(i64::from(p)))?;
    }
    acc.threshold(policy)
}

/// [`encode_pixels_hologn`] with both rotations of every index vector cached.
#[derive(Debug, Clone)]
pub struct PixelEncoder {
    width: usize,
    height: usize,
    dim: usize,
    // variants[j][p] = ρ^p(px_j)
    variants: Vec<[BinaryHv; 2]>,
    policy: TiePolicy,
}

impl PixelEncoder {
    pub fn new(im: &ItemMemory, width: usize, height: usize, policy: TiePolicy) -> Self {
        let variants = (0..width * height)
            .map(|j| {
                let base = im.get(&pixel_symbol(j));
                let shifted = base.permute(1);
                [base, shifted]
            })
            .collect();
        Self {
            width,
            height,
            dim: im.dim(),
            variants,
            policy,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn encode(&self, grid: &PixelGrid) -> Result<BinaryHv> {
        if grid.width() != self.width || grid.height() != self.height {
            return Err(Error::DimensionMismatch {
                expected: self.width * self.height,
                found: grid.len(),
            });
        }
        let mut acc = Accumulator::new(self.dim);
        for (v, &p) in self.variants.iter().zip(grid.pixels()) {
            acc.add(&v[p as usize])?;
        }
        acc.threshold(self.policy)
    }
}
