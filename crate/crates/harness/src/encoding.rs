//! Encoder configurations saved alongside models, and batch encoding.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use hdc_core::encode::{signal_windows, PixelEncoder, PixelGrid, RecordEncoder, SignalEncoder, TextEncoder};
use hdc_core::learn::Labeled;
use hdc_core::memory::{half_span_flips, ContinuousItemMemory, ItemMemory, LevelConfig};
use hdc_core::{BinaryHv, HvSpace, TiePolicy};

use crate::data::{FeatureDataset, SignalRecording, TextCorpus};
use crate::error::{HarnessError, Result};

pub const DEFAULT_LEVELS: usize = 10;
pub const DEFAULT_NGRAM: usize = 3;
pub const UNLABELED: &str = "unlabeled";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EncoderSpec {
    /// Position-bound level vectors; `flips_per_level` is the level-chain step.
    Record {
        features: usize,
        levels: usize,
        f_min: f64,
        f_max: f64,
        flips_per_level: usize,
        flip_seed: u64,
    },
    /// Thresholded N-gram profile of a line of text.
    Text { n: usize },
    /// Pixel grids with each pixel vector rotated once when set.
    Pixel { width: usize, height: usize },
    /// LBP-coded multichannel windows of `window` codes every `hop` codes.
    Signal { channels: usize, window: usize, hop: usize },
}

impl EncoderSpec {
    /// A record encoder spanning the data's value range, with level steps that
    /// leave the two extreme levels quasi-orthogonal.
    pub fn record_for(ds: &FeatureDataset, dim: usize, levels: usize, flip_seed: u64) -> Self {
        let (lo, hi) = ds.value_range();
        let hi = if hi > lo { hi } else { lo + 1.0 };
        EncoderSpec::Record {
            features: ds.feature_names.len(),
            levels,
            f_min: lo,
            f_max: hi,
            flips_per_level: half_span_flips(dim, levels),
            flip_seed,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EncoderSpec::Record { .. } => "record",
            EncoderSpec::Text { .. } => "text",
            EncoderSpec::Pixel { .. } => "pixel",
            EncoderSpec::Signal { .. } => "signal",
        }
    }

    pub fn build(&self, space: HvSpace, policy: TiePolicy) -> Result<Encoder> {
        let im = ItemMemory::new(space);
        Ok(match *self {
            EncoderSpec::Record {
                levels,
                f_min,
                f_max,
                flips_per_level,
                flip_seed,
                ..
            } => {
                let config = LevelConfig::new(levels, f_min, f_max, flip_seed).with_flips(flips_per_level);
                let cim = ContinuousItemMemory::from_config(space, config)?;
                Encoder::Record(RecordEncoder::new(im, cim, policy)?)
            }
            EncoderSpec::Text { n } => Encoder::Text(TextEncoder::new(&im, n)?, policy),
            EncoderSpec::Pixel { width, height } => Encoder::Pixel(PixelEncoder::new(&im, width, height, policy)),
            EncoderSpec::Signal { channels, window, hop } => {
                Encoder::Signal(SignalEncoder::new(&im, channels, policy), window, hop)
            }
        })
    }
}

/// Raw inputs of any supported format.
#[derive(Debug, Clone, PartialEq)]
pub enum RawData {
    Features(FeatureDataset),
    Text(TextCorpus),
    Glyphs(Vec<(String, PixelGrid)>),
    Signal(SignalRecording),
}

impl RawData {
    pub fn kind(&self) -> &'static str {
        match self {
            RawData::Features(_) => "record",
            RawData::Text(_) => "text",
            RawData::Glyphs(_) => "pixel",
            RawData::Signal(_) => "signal",
        }
    }
}

pub enum Encoder {
    Record(RecordEncoder),
    Text(TextEncoder, TiePolicy),
    Pixel(PixelEncoder),
    Signal(SignalEncoder, usize, usize),
}

impl Encoder {
    /// Encodes every sample, preserving input order.
    pub fn encode_all(&self, raw: &RawData) -> Result<Vec<Labeled>> {
        let mismatch = || HarnessError::Usage(format!("input is {} data but the encoder expects another format", raw.kind()));
        let out: std::result::Result<Vec<_>, hdc_core::Error> = match (self, raw) {
            (Encoder::Record(enc), RawData::Features(ds)) => ds
                .rows
                .par_iter()
                .zip(&ds.labels)
                .map(|(row, label)| Ok(Labeled::new(label.clone(), enc.encode(row)?)))
                .collect(),
            (Encoder::Text(enc, policy), RawData::Text(corpus)) => corpus
                .texts
                .par_iter()
                .zip(&corpus.labels)
                .map(|(text, label)| Ok(Labeled::new(label.clone(), enc.profile(text, *policy)?)))
                .collect(),
            (Encoder::Pixel(enc), RawData::Glyphs(glyphs)) => glyphs
                .par_iter()
                .map(|(label, grid)| Ok(Labeled::new(label.clone(), enc.encode(grid)?)))
                .collect(),
            (Encoder::Signal(enc, window, hop), RawData::Signal(rec)) => {
                let windows = signal_windows(&rec.channels, *window, *hop)?;
                let labels = window_labels(rec, windows.len(), *window, *hop);
                windows
                    .par_iter()
                    .zip(labels)
                    .map(|(w, label)| Ok(Labeled::new(label, enc.encode(w)?)))
                    .collect()
            }
            _ => return Err(mismatch()),
        };
        Ok(out?)
    }

    pub fn encode_one(&self, raw: &RawData) -> Result<Vec<BinaryHv>> {
        Ok(self.encode_all(raw)?.into_iter().map(|l| l.hv).collect())
    }
}

/// Most frequent sample label in each window's span (ties to the smaller label).
fn window_labels(rec: &SignalRecording, count: usize, window: usize, hop: usize) -> Vec<String> {
    let Some(labels) = &rec.labels else {
        return vec![UNLABELED.to_owned(); count];
    };
    let span = window + hdc_core::encode::LBP_SPAN - 1;
    (0..count)
        .map(|w| {
            let mut votes: std::collections::BTreeMap<&str, usize> = Default::default();
            for l in &labels[w * hop..(w * hop + span).min(labels.len())] {
                *votes.entry(l.as_str()).or_default() += 1;
            }
            let best = votes.values().copied().max().unwrap_or(0);
            votes
                .into_iter()
                .find(|&(_, n)| n == best)
                .map_or_else(|| UNLABELED.to_owned(), |(l, _)| l.to_owned())
        })
        .collect()
}
