use crate::error::{Error, Result};
use crate::hv::BipolarHv;

/// The first `s` rows of the order-`D` Sylvester–Hadamard matrix.
///
/// Entry `(i, j)` is `(−1)^popcount(i & j)`, so row 0 is all +1 and any two
/// distinct rows have inner product exactly 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardKeySet {
    order: usize,
    keys: Vec<BipolarHv>,
}

impl HadamardKeySet {
    pub fn sylvester(count: usize, order: usize) -> Result<Self> {
        if !order.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(order));
        }
        if count == 0 || count > order {
            return Err(Error::TooManyKeys { count, order });
        }
        let keys = (0..count)
            .map(|i| {
                let row = (0..order)
                    .map(|j| if (i & j).count_ones() % 2 == 0 { 1 } else { -1 })
                    .collect();
                BipolarHv::from_values(row).expect("entries are ±1")
            })
            .collect();
        Ok(Self { order, keys })
    }

    /// Keys for splitting a `dim`-component vector into `segments` pieces,
    /// with the segment length rounded up to a power of two.
    pub fn for_dimension(dim: usize, segments: usize) -> Result<Self> {
        if segments == 0 {
            return Err(Error::TooManyKeys { count: 0, order: 0 });
        }
        Self::sylvester(segments, Self::segment_dim_for(dim, segments))
    }

    /// `next_power_of_two(⌈dim / segments⌉)`.
    pub fn segment_dim_for(dim: usize, segments: usize) -> usize {
        dim.div_ceil(segments.max(1)).next_power_of_two()
    }

    pub fn segments(&self) -> usize {
        self.keys.len()
    }

    pub fn segment_dim(&self) -> usize {
        self.order
    }

    pub fn keys(&self) -> &[BipolarHv] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> &BipolarHv {
        &self.keys[i]
    }
}
