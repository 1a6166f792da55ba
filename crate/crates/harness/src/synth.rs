//! Seeded synthetic datasets standing in for unavailable corpora.

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use hdc_core::encode::{FeatureVector, ALPHABET};

use crate::data::{FeatureDataset, TextCorpus};
use crate::trial_rng;

/// Gaussian blobs around uniform random centres in `[0, 1]^features`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub classes: usize,
    pub per_class: usize,
    pub features: usize,
    /// Standard deviation of each feature around its class centre.
    pub spread: f64,
    pub seed: u64,
}

impl ClusterSpec {
    pub fn new(classes: usize, per_class: usize, features: usize, spread: f64, seed: u64) -> Self {
        Self {
            classes,
            per_class,
            features,
            spread,
            seed,
        }
    }
}

/// Rows cycle through the classes (`c0, c1, …`), so any prefix is balanced.
pub fn gaussian_clusters(spec: &ClusterSpec) -> FeatureDataset {
    let mut rng = trial_rng(spec.seed, 0);
    let centres: Vec<Vec<f64>> = (0..spec.classes)
        .map(|_| (0..spec.features).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let noise = Normal::new(0.0, spec.spread.max(0.0)).expect("finite spread");
    let mut ds = FeatureDataset {
        feature_names: (1..=spec.features).map(|i| format!("f{i}")).collect(),
        labels: Vec::new(),
        rows: Vec::new(),
    };
    for _ in 0..spec.per_class {
        for (c, centre) in centres.iter().enumerate() {
            let values = centre.iter().map(|&m| m + noise.sample(&mut rng)).collect();
            ds.labels.push(format!("c{c}"));
            ds.rows.push(FeatureVector::new(values).expect("finite features"));
        }
    }
    ds
}

/// Languages as first-order Markov chains over the 27-symbol alphabet.
///
/// Each language's transition row mixes a shared row (weight `overlap`) with
/// its own peaked row, so `overlap = 0` gives unrelated languages and
/// `overlap = 1` identical ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanguageSpec {
    pub languages: usize,
    pub overlap: f64,
    pub train_sentences: usize,
    pub test_sentences: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub seed: u64,
}

impl Default for LanguageSpec {
    fn default() -> Self {
        Self {
            languages: 5,
            overlap: 0.2,
            train_sentences: 100,
            test_sentences: 40,
            min_len: 60,
            max_len: 120,
            seed: 42,
        }
    }
}

fn random_rows(rng: &mut impl Rng, sharpness: i32) -> Vec<Vec<f64>> {
    (0..27)
        .map(|_| {
            let row: Vec<f64> = (0..27).map(|_| rng.gen::<f64>().powi(sharpness)).collect();
            let total: f64 = row.iter().sum();
            row.into_iter().map(|w| w / total).collect()
        })
        .collect()
}

pub fn language_name(i: usize) -> String {
    format!("lang{i}")
}

/// Training and test corpora; test sentences are drawn after training ones
/// from the same chains.
pub fn synthetic_languages(spec: &LanguageSpec) -> (TextCorpus, TextCorpus) {
    let letters: Vec<char> = ALPHABET.chars().collect();
    let mut rng = trial_rng(spec.seed, 0);
    let shared = random_rows(&mut rng, 1);
    let mut train = TextCorpus {
        labels: Vec::new(),
        texts: Vec::new(),
    };
    let mut test = train.clone();
    let overlap = spec.overlap.clamp(0.0, 1.0);
    for lang in 0..spec.languages {
        let own = random_rows(&mut rng, 4);
        let chains: Vec<WeightedIndex<f64>> = own
            .iter()
            .zip(&shared)
            .map(|(o, s)| {
                WeightedIndex::new(o.iter().zip(s).map(|(a, b)| (1.0 - overlap) * a + overlap * b)).expect("positive weights")
            })
            .collect();
        let mut lang_rng = trial_rng(spec.seed, lang as u64 + 1);
        for i in 0..spec.train_sentences + spec.test_sentences {
            let len = lang_rng.gen_range(spec.min_len..=spec.max_len.max(spec.min_len));
            let mut state = 26;
            let sentence: String = (0..len)
                .map(|_| {
                    state = chains[state].sample(&mut lang_rng);
                    letters[state]
                })
                .collect();
            let corpus = if i < spec.train_sentences { &mut train } else { &mut test };
            corpus.labels.push(language_name(lang));
            corpus.texts.push(sentence);
        }
    }
    (train, test)
}
