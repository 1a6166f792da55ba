//! Hyperdimensional classification primitives.
//!
//! The crate is layered bottom-up:
//!
//! - [`hv`]: bit-packed binary hypervectors, bipolar/ternary dense vectors,
//!   bundling, binding, permutation and the similarity metrics.
//! - [`memory`]: seeded item memories, level (continuous) item memories and
//!   Sylvester-Hadamard key sets.
//! - [`encode`]: mappings from records, sequences, text, pixel grids and
//!   sampled signals into hypervectors.
//! - [`learn`]: associative-memory training, retraining, quantization,
//!   compression, self-training and evaluation.

pub mod encode;
pub mod error;
pub mod hv;
pub mod learn;
pub mod memory;
mod rng;

pub use error::{Error, Result};
pub use hv::{
    bundle, Accumulator, BinaryHv, BipolarHv, DenseVector, HvSpace, Metric, Similarity,
    TernaryHv, TiePolicy,
};
