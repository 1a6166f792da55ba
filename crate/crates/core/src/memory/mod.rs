//! Seeded stores of hypervectors consumed by the encoders.
//!
//! - [`ItemMemory`]: quasi-orthogonal vectors for discrete symbols.
//! - [`ContinuousItemMemory`]: a chain of correlated level vectors for
//!   quantized scalars.
//! - [`HadamardKeySet`]: exactly orthogonal ±1 keys for model compression.

mod hadamard;
mod item;
mod level;

pub use hadamard::HadamardKeySet;
pub use item::ItemMemory;
pub use level::{half_span_flips, ContinuousItemMemory, LevelConfig};
