//! Character recognition under pixel noise and language identification from
//! N-gram profiles.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use hdc_core::encode::{PixelEncoder, PixelGrid, TextEncoder};
use hdc_core::learn::{
    train_single_pass, AssociativeMemory, ClassEntry, ClassVector, Labeled, ModelKind,
};
use hdc_core::memory::ItemMemory;
use hdc_core::{Accumulator, HvSpace, TiePolicy};

use crate::data::TextCorpus;
use crate::error::{HarnessError, Result};
use crate::trial_rng;

pub const DEFAULT_CHAR_TRIALS: usize = 100;
pub const DEFAULT_CHAR_DIMS: [usize; 3] = [4000, 10_000, 12_000];

/// Independent per-pixel flips with probability `flip_probability`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionSpec {
    pub flip_probability: f64,
    pub seed: u64,
}

/// Flips pixel `j` when `uniforms[j] < p`; one set of uniforms serves a whole
/// sweep, so each pixel flipped at `p` is also flipped at every larger `p`.
pub fn distort(grid: &PixelGrid, uniforms: &[f64], p: f64) -> PixelGrid {
    let pixels = grid
        .pixels()
        .iter()
        .zip(uniforms)
        .map(|(&px, &u)| if u < p { 1 - px } else { px })
        .collect();
    PixelGrid::new(grid.width(), grid.height(), pixels).expect("same shape")
}

/// Flip probabilities `k/pixels` for `k = 0..=max_flips`.
pub fn pixel_fraction_sweep(pixels: usize, max_flips: usize) -> Vec<f64> {
    (0..=max_flips).map(|k| k as f64 / pixels as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharBenchSpec {
    pub dims: Vec<usize>,
    pub flip_probabilities: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub policy: TiePolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharRow {
    pub dim: usize,
    pub flip_probability: f64,
    pub trials: usize,
    pub accuracy: f64,
    /// Half-width of the normal-approximation 95 % interval over trials.
    pub ci95: f64,
}

/// Trains one class per glyph on clean encodings and scores distorted copies.
/// A trial distorts every glyph once at every flip probability.
pub fn bench_character(font: &[(String, PixelGrid)], spec: &CharBenchSpec) -> Result<Vec<CharRow>> {
    let first = &font.first().ok_or_else(|| HarnessError::EmptyDataset("font".into()))?.1;
    if spec.trials == 0 {
        return Err(HarnessError::Usage("trials must be at least 1".into()));
    }
    if let Some(p) = spec.flip_probabilities.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(HarnessError::Usage(format!("flip probability {p} is outside [0, 1]")));
    }
    let (w, h) = (first.width(), first.height());
    let mut rows = Vec::new();
    for &dim in &spec.dims {
        let im = ItemMemory::new(HvSpace::new(dim, spec.seed)?);
        let enc = PixelEncoder::new(&im, w, h, spec.policy);
        let clean = font
            .iter()
            .map(|(l, g)| Ok(Labeled::new(l.clone(), enc.encode(g)?)))
            .collect::<Result<Vec<_>>>()?;
        let am = train_single_pass(&clean, ModelKind::Binary, spec.policy)?;
        let truth: Vec<usize> = font.iter().map(|(l, _)| am.index_of(l)).collect::<std::result::Result<_, _>>()?;
        let per_trial = (0..spec.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(spec.seed, t as u64);
                let uniforms: Vec<Vec<f64>> =
                    font.iter().map(|_| (0..w * h).map(|_| rng.gen::<f64>()).collect()).collect();
                spec.flip_probabilities
                    .iter()
                    .map(|&p| {
                        let mut correct = 0;
                        for (((_, g), u), &y) in font.iter().zip(&uniforms).zip(&truth) {
                            let q = distort(g, u, p);
                            let hv = if &q == g { clean[y].hv.clone() } else { enc.encode(&q)? };
                            correct += usize::from(am.predict_hv(&hv)?.index == y);
                        }
                        Ok(correct as f64 / font.len() as f64)
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, &p) in spec.flip_probabilities.iter().enumerate() {
            let accs: Vec<f64> = per_trial.iter().map(|t| t[i]).collect();
            let n = accs.len() as f64;
            let mean = accs.iter().sum::<f64>() / n;
            let var = if accs.len() > 1 {
                accs.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            rows.push(CharRow {
                dim,
                flip_probability: p,
                trials: spec.trials,
                accuracy: mean,
                ci95: 1.96 * (var / n).sqrt(),
            });
        }
    }
    Ok(rows)
}

/// Counts beyond this many N-gram slots are not materialized for the baseline.
const MAX_BASELINE_SLOTS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LangBench {
    pub n: usize,
    pub dim: usize,
    pub languages: Vec<String>,
    pub test_count: usize,
    pub hd_accuracy: f64,
    /// Cosine nearest neighbour over raw `27^n` N-gram counts, when that table fits.
    pub baseline_accuracy: Option<f64>,
    pub baseline_slots: usize,
    /// Share of test sentences on which both classifiers pick the same language.
    pub agreement: Option<f64>,
    pub per_language: BTreeMap<String, f64>,
}

fn count_index(window: &[u8]) -> usize {
    window.iter().fold(0, |acc, &c| acc * 27 + c as usize)
}

fn count_cosine(class: &[f64], class_norm: f64, query: &BTreeMap<usize, f64>) -> f64 {
    let dot: f64 = query.iter().map(|(&i, &c)| class[i] * c).sum();
    let qn = query.values().map(|c| c * c).sum::<f64>().sqrt();
    if class_norm == 0.0 || qn == 0.0 {
        0.0
    } else {
        dot / (class_norm * qn)
    }
}

fn ngram_counts(text: &str, n: usize) -> Result<BTreeMap<usize, f64>> {
    let letters = TextEncoder::letter_indices(text);
    if letters.len() < n {
        return Err(hdc_core::Error::InputTooShort {
            needed: n,
            found: letters.len(),
        }
        .into());
    }
    let mut counts = BTreeMap::new();
    for w in letters.windows(n) {
        *counts.entry(count_index(w)).or_insert(0.0) += 1.0;
    }
    Ok(counts)
}

/// One profile per language from all its training lines; each test line is
/// classified by its own profile.
pub fn bench_language(
    train: &TextCorpus,
    test: &TextCorpus,
    n: usize,
    dim: usize,
    seed: u64,
    policy: TiePolicy,
) -> Result<LangBench> {
    if train.is_empty() || test.is_empty() {
        return Err(HarnessError::EmptyDataset("language corpus".into()));
    }
    let im = ItemMemory::new(HvSpace::new(dim, seed)?);
    let enc = TextEncoder::new(&im, n)?;
    let mut by_lang: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (l, t) in train.labels.iter().zip(&train.texts) {
        by_lang.entry(l).or_default().push(t);
    }
    let languages: Vec<String> = by_lang.keys().map(|s| s.to_string()).collect();
    let classes = by_lang
        .par_iter()
        .map(|(label, texts)| {
            let mut acc = Accumulator::new(dim);
            for t in texts {
                enc.accumulate(t, &mut acc)?;
            }
            Ok(ClassEntry {
                label: label.to_string(),
                vector: ClassVector::Binary(acc.threshold(policy)?),
                accumulator: Some(acc.bipolar_sums()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let am = AssociativeMemory::new(ModelKind::Binary, dim, classes)?;

    let slots = 27usize.checked_pow(n as u32).filter(|&s| s <= MAX_BASELINE_SLOTS);
    let baseline = match slots {
        Some(slots) => {
            let mut tables = vec![vec![0.0f64; slots]; languages.len()];
            for (l, t) in train.labels.iter().zip(&train.texts) {
                let i = am.index_of(l)?;
                for (k, c) in ngram_counts(t, n)? {
                    tables[i][k] += c;
                }
            }
            let norms: Vec<f64> = tables.iter().map(|t| t.iter().map(|c| c * c).sum::<f64>().sqrt()).collect();
            Some((tables, norms))
        }
        None => None,
    };

    let results = test
        .texts
        .par_iter()
        .zip(&test.labels)
        .map(|(text, label)| {
            let truth = am.index_of(label)?;
            let hd = am.predict_hv(&enc.profile(text, policy)?)?.index;
            let base = match &baseline {
                Some((tables, norms)) => {
                    let q = ngram_counts(text, n)?;
                    let mut best = 0;
                    let mut best_score = f64::NEG_INFINITY;
                    for (i, (t, &nrm)) in tables.iter().zip(norms).enumerate() {
                        let s = count_cosine(t, nrm, &q);
                        if s > best_score {
                            best = i;
                            best_score = s;
                        }
                    }
                    Some(best)
                }
                None => None,
            };
            Ok((truth, hd, base))
        })
        .collect::<Result<Vec<_>>>()?;

    let total = results.len() as f64;
    let hd_accuracy = results.iter().filter(|r| r.0 == r.1).count() as f64 / total;
    let (baseline_accuracy, agreement) = if baseline.is_some() {
        let correct = results.iter().filter(|r| Some(r.0) == r.2).count() as f64;
        let agree = results.iter().filter(|r| Some(r.1) == r.2).count() as f64;
        (Some(correct / total), Some(agree / total))
    } else {
        (None, None)
    };
    let mut per_language = BTreeMap::new();
    for (i, lang) in languages.iter().enumerate() {
        let mine: Vec<_> = results.iter().filter(|r| r.0 == i).collect();
        if !mine.is_empty() {
            let acc = mine.iter().filter(|r| r.0 == r.1).count() as f64 / mine.len() as f64;
            per_language.insert(lang.clone(), acc);
        }
    }
    Ok(LangBench {
        n,
        dim,
        languages,
        test_count: results.len(),
        hd_accuracy,
        baseline_accuracy,
        baseline_slots: slots.unwrap_or(0),
        agreement,
        per_language,
    })
}
