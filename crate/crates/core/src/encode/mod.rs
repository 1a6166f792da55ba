//! Encoders from raw inputs to binary hypervectors.
//!
//! Every encoder is a deterministic function of its input, the seeds of the
//! memories it reads, and the tie policy used for bundling.

mod image;
mod ngram;
mod record;
mod signal;
mod symbolic;

pub use image::{encode_pixels_hologn, PixelEncoder, PixelGrid};
pub use ngram::{encode_ngram, encode_text_profile, normalize_text, TextEncoder, ALPHABET};
pub use record::{encode_record_features, FeatureVector, RecordEncoder};
pub use signal::{
    encode_signal_window, lbp_codes, signal_windows, SignalEncoder, SignalWindow, LBP_SPAN,
    WINDOW_HOP, WINDOW_SAMPLES,
};
pub use symbolic::{
    encode_pair, encode_record, encode_sequence, encode_set, extend_sequence, extract_field,
    extract_first, release, SymbolSequence,
};
