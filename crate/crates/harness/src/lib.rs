//! Experiment harness for the `hdc-core` classifiers: dataset loaders,
//! synthetic data, operation statistics, benchmarks, model files and the
//! `hdc` command line.

pub mod bench;
pub mod cli;
pub mod data;
pub mod encoding;
pub mod error;
pub mod modelfile;
pub mod stats;
pub mod synth;

pub use error::{HarnessError, Result};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random stream `stream` under `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
