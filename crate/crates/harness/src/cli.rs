//! The `hdc` command line.
//!
//! Results go to `--out` (or stdout) as JSON or CSV. Commands that transform
//! a model (`retrain`, `quantize`, `compress`) read `--model` and write the
//! new model to `--out`; `train` and `semi-train` write to `--model`. Every
//! run also writes a JSON manifest with the resolved configuration and
//! seeds: to `--manifest` if given, otherwise next to the main output file as
//! `<file>.manifest.json`, otherwise as one line on stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use serde::Serialize;
use serde_json::{json, Value};

use hdc_core::learn::{
    compress_model, evaluate, quantize_model, retrain_adapthd_observed, semi_supervised_train, train_single_pass,
    AdaptSchedule, Labeled, ModelKind, QuantConfig, QuantTarget, RetrainConfig, RetrainEvent, SemiConfig,
};
use hdc_core::memory::HadamardKeySet;
use hdc_core::{HvSpace, TiePolicy};

use crate::bench::{bench_character, bench_language, pixel_fraction_sweep, CharBenchSpec, DEFAULT_CHAR_DIMS};
use crate::data::{builtin_font, load_feature_csv, load_font, load_language_corpus, load_signal_csv, load_text_corpus, LABEL_COLUMN};
use crate::encoding::{EncoderSpec, RawData, DEFAULT_LEVELS, DEFAULT_NGRAM};
use crate::error::{HarnessError, Result};
use crate::modelfile::{load_model, save_model, SavedModel};
use crate::stats::{run_stats, ExperimentSpec};
use crate::synth::{synthetic_languages, LanguageSpec};
use crate::trial_rng;

pub const SEED_ENV: &str = "HDCLASS_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    /// CSV with a `label` column and numeric feature columns.
    Features,
    /// Directory of `<label>.txt` files, one sample per line.
    Text,
    /// Font file of labeled 0/1 glyphs.
    Font,
    /// CSV with one column per channel and a per-sample `label` column.
    Signal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrainKind {
    Integer,
    Binary,
}

impl TrainKind {
    fn model_kind(self) -> ModelKind {
        match self {
            TrainKind::Integer => ModelKind::IntegerCentroid,
            TrainKind::Binary => ModelKind::Binary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    Iteration,
    Data,
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Binary,
    Bipolar,
    Ternary,
}

fn parse_policy(s: &str) -> std::result::Result<TiePolicy, String> {
    s.parse().map_err(|e: hdc_core::Error| e.to_string())
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "hdc", version, about = "Hyperdimensional classification experiments", arg_required_else_help = true)]
pub struct Cli {
    /// Hypervector dimension.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub dim: usize,
    /// Master seed for item memories, shuffles and synthetic data.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Bundling tie rule: favor-zero, favor-one, random or random:<seed>.
    #[arg(long, global = true, default_value = "random", value_parser = parse_policy)]
    pub policy: TiePolicy,
    /// Model file to read, or to write for train and semi-train.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Result file, or the output model for retrain/quantize/compress.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Where to write the run manifest.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct EncodeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputKind::Features)]
    pub input_kind: InputKind,
    /// Level count of the feature encoder.
    #[arg(long, default_value_t = DEFAULT_LEVELS)]
    pub levels: usize,
    /// Bits flipped between neighbouring levels; defaults to half the span over all levels.
    #[arg(long)]
    pub flips_per_level: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_NGRAM)]
    pub ngram: usize,
    #[arg(long, default_value_t = hdc_core::encode::WINDOW_SAMPLES)]
    pub window: usize,
    #[arg(long, default_value_t = hdc_core::encode::WINDOW_HOP)]
    pub hop: usize,
    #[arg(long, value_enum, default_value_t = TrainKind::Integer)]
    pub kind: TrainKind,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Distance distributions of random pairs, bundles, bindings and permutations.
    Stats {
        #[arg(long, default_value_t = crate::stats::DEFAULT_TRIALS)]
        trials: usize,
        /// Dimensions for the random-pair experiment.
        #[arg(long, value_delimiter = ',', default_values_t = crate::stats::DEFAULT_PAIR_DIMS)]
        dims: Vec<usize>,
    },
    /// Single-pass training.
    Train(EncodeArgs),
    /// Adaptive retraining of an integer model.
    Retrain {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = ScheduleKind::Hybrid)]
        schedule: ScheduleKind,
        #[arg(long, default_value_t = hdc_core::learn::DEFAULT_ALPHA_MAX)]
        alpha_max: u32,
        #[arg(long, default_value_t = hdc_core::learn::DEFAULT_BETA)]
        beta: usize,
        #[arg(long, default_value_t = hdc_core::learn::DEFAULT_MAX_EPOCHS)]
        max_epochs: usize,
    },
    /// Projection of an integer model to binary, bipolar or ternary classes.
    Quantize {
        /// Training data for retraining between projections.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TargetKind::Binary)]
        target: TargetKind,
        #[arg(long, default_value_t = hdc_core::learn::DEFAULT_TAU)]
        tau: f64,
        #[arg(long, default_value_t = hdc_core::learn::DEFAULT_QUANT_EPOCHS)]
        epochs: usize,
    },
    /// Hadamard-keyed model compression.
    Compress {
        #[arg(long, default_value_t = 20)]
        segments: usize,
    },
    /// Per-row predictions of a saved model.
    Predict(InputArgs),
    /// Accuracy and confusion matrix of a saved model.
    Eval(InputArgs),
    /// Character recognition under pixel flips.
    BenchChar {
        /// Font file; the bundled 5x7 font by default.
        #[arg(long)]
        font: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_CHAR_DIMS)]
        dims: Vec<usize>,
        /// Flip probabilities; defaults to 0, 1/35, …, 7/35.
        #[arg(long, value_delimiter = ',')]
        flips: Option<Vec<f64>>,
        #[arg(long, default_value_t = crate::bench::DEFAULT_CHAR_TRIALS)]
        trials: usize,
    },
    /// Language identification from N-gram profiles against a count baseline.
    BenchLang {
        /// Directory with `train/` and `test/` corpora; synthetic languages otherwise.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NGRAM)]
        ngram: usize,
        #[arg(long, default_value_t = LanguageSpec::default().languages)]
        languages: usize,
        #[arg(long, default_value_t = LanguageSpec::default().overlap)]
        overlap: f64,
        #[arg(long, default_value_t = LanguageSpec::default().train_sentences)]
        train_sentences: usize,
        #[arg(long, default_value_t = LanguageSpec::default().test_sentences)]
        test_sentences: usize,
    },
    /// Self-training from a labeled fraction of the input.
    SemiTrain {
        #[command(flatten)]
        encode: EncodeArgs,
        /// Share of the (shuffled) input that keeps its labels.
        #[arg(long, default_value_t = 0.1)]
        labeled_fraction: f64,
        #[arg(long, default_value_t = hdc_core::learn::DEFAULT_SELECT_PERCENT)]
        select_percent: f64,
        #[arg(long, default_value_t = hdc_core::learn::DEFAULT_EPSILON)]
        epsilon: f64,
        /// Held-out labeled data in the same format as the input.
        #[arg(long)]
        holdout: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Stats { .. } => "stats",
            Command::Train(_) => "train",
            Command::Retrain { .. } => "retrain",
            Command::Quantize { .. } => "quantize",
            Command::Compress { .. } => "compress",
            Command::Predict(_) => "predict",
            Command::Eval(_) => "eval",
            Command::BenchChar { .. } => "bench-char",
            Command::BenchLang { .. } => "bench-lang",
            Command::SemiTrain { .. } => "semi-train",
        }
    }
}

/// A result as JSON plus a rectangular CSV rendering.
struct Output {
    json: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Output {
    fn key_values(json: Value, pairs: Vec<(String, String)>) -> Self {
        Self {
            json,
            header: vec!["key".into(), "value".into()],
            rows: pairs.into_iter().map(|(k, v)| vec![k, v]).collect(),
        }
    }

    fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_vec_pretty(&self.json).map_err(|e| HarnessError::Format(e.to_string()))?;
                s.push(b'\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).and_then(|_| {
                    self.rows.iter().try_for_each(|r| w.write_record(r))
                }).map_err(|e| HarnessError::Format(e.to_string()))?;
                w.into_inner().map_err(|e| HarnessError::Format(e.to_string()))
            }
        }
    }
}

fn scalar_pairs(v: &Value, prefix: &str, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                scalar_pairs(x, &key, out);
            }
        }
        Value::Array(_) => out.push((prefix.to_owned(), v.to_string())),
        Value::String(s) => out.push((prefix.to_owned(), s.clone())),
        other => out.push((prefix.to_owned(), other.to_string())),
    }
}

fn summary(json: Value) -> Output {
    let mut pairs = Vec::new();
    scalar_pairs(&json, "", &mut pairs);
    Output::key_values(json, pairs)
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

struct Run<'a> {
    cli: &'a Cli,
    stdout: &'a mut dyn Write,
    /// Files written by the run, for the manifest.
    written: Vec<PathBuf>,
    /// Derived seeds and parameters beyond the command line.
    resolved: serde_json::Map<String, Value>,
}

fn require<'p>(path: &'p Option<PathBuf>, flag: &str, command: &str) -> Result<&'p Path> {
    path.as_deref()
        .ok_or_else(|| HarnessError::Usage(format!("{command} needs --{flag}")))
}

fn load_raw(kind: InputKind, path: &Path) -> Result<RawData> {
    Ok(match kind {
        InputKind::Features => RawData::Features(load_feature_csv(path, LABEL_COLUMN)?),
        InputKind::Text => RawData::Text(load_text_corpus(path)?),
        InputKind::Font => RawData::Glyphs(load_font(path)?),
        InputKind::Signal => RawData::Signal(load_signal_csv(path)?),
    })
}

fn input_kind_for(spec: &EncoderSpec) -> InputKind {
    match spec {
        EncoderSpec::Record { .. } => InputKind::Features,
        EncoderSpec::Text { .. } => InputKind::Text,
        EncoderSpec::Pixel { .. } => InputKind::Font,
        EncoderSpec::Signal { .. } => InputKind::Signal,
    }
}

/// Encodes `path` with a saved model's encoder, after checking the shape matches.
fn encode_with(model: &SavedModel, path: &Path) -> Result<Vec<Labeled>> {
    let raw = load_raw(input_kind_for(&model.encoder), path)?;
    match (&model.encoder, &raw) {
        (EncoderSpec::Record { features, .. }, RawData::Features(ds)) if ds.feature_names.len() != *features => {
            return Err(HarnessError::malformed(
                &path.display().to_string(),
                1,
                format!("{} feature columns, the model expects {features}", ds.feature_names.len()),
            ));
        }
        _ => {}
    }
    model.encoder.build(model.space, model.policy)?.encode_all(&raw)
}

fn step(training: &mut Value, entry: Value) {
    if !training.is_object() {
        *training = json!({});
    }
    let steps = training
        .as_object_mut()
        .expect("object")
        .entry("steps")
        .or_insert_with(|| json!([]));
    if let Some(a) = steps.as_array_mut() {
        a.push(entry);
    }
}

impl Run<'_> {
    fn space(&self) -> Result<HvSpace> {
        Ok(HvSpace::new(self.cli.dim, self.cli.seed)?)
    }

    fn emit(&mut self, output: &Output, to_file: bool) -> Result<()> {
        let bytes = output.render(self.cli.format)?;
        match (&self.cli.out, to_file) {
            (Some(path), true) => {
                fs::write(path, &bytes).map_err(|e| HarnessError::io(path, e))?;
                self.written.push(path.clone());
            }
            _ => self.stdout.write_all(&bytes).map_err(|e| HarnessError::io("<stdout>", e))?,
        }
        Ok(())
    }

    fn save(&mut self, path: &Path, model: &SavedModel) -> Result<()> {
        save_model(path, model)?;
        self.written.push(path.to_owned());
        Ok(())
    }

    fn load(&mut self, command: &str) -> Result<SavedModel> {
        let model = load_model(require(&self.cli.model, "model", command)?)?;
        self.resolved.insert("model_space".into(), json!({ "dim": model.space.dim(), "seed": model.space.seed() }));
        self.resolved.insert("model_policy".into(), json!(model.policy.to_string()));
        Ok(model)
    }

    fn encoder_spec(&mut self, args: &EncodeArgs, raw: &RawData) -> Result<EncoderSpec> {
        let spec = match raw {
            RawData::Features(ds) => {
                let flip_seed = self.cli.seed.wrapping_add(1);
                let mut spec = EncoderSpec::record_for(ds, self.cli.dim, args.levels, flip_seed);
                if let (EncoderSpec::Record { flips_per_level, .. }, Some(f)) = (&mut spec, args.flips_per_level) {
                    *flips_per_level = f;
                }
                spec
            }
            RawData::Text(_) => EncoderSpec::Text { n: args.ngram },
            RawData::Glyphs(g) => EncoderSpec::Pixel {
                width: g[0].1.width(),
                height: g[0].1.height(),
            },
            RawData::Signal(rec) => EncoderSpec::Signal {
                channels: rec.channels.len(),
                window: args.window,
                hop: args.hop,
            },
        };
        self.resolved.insert("encoder".into(), to_json(&spec));
        Ok(spec)
    }

    fn stats(&mut self, trials: usize, dims: &[usize]) -> Result<()> {
        let spec = ExperimentSpec {
            dimensions: dims.to_vec(),
            ..ExperimentSpec::new(self.cli.dim, trials, self.cli.seed, self.cli.policy)
        };
        let report = run_stats(&spec)?;
        let header = ["experiment", "dim", "trials", "mean", "std", "bin_lo", "bin_hi", "count", "density"];
        let mut rows = Vec::new();
        for d in &report.distributions {
            for b in &d.histogram {
                rows.push(vec![
                    d.experiment.clone(),
                    d.dim.to_string(),
                    d.trials.to_string(),
                    d.mean.to_string(),
                    d.std.to_string(),
                    format!("{:.3}", b.lo),
                    format!("{:.3}", b.hi),
                    b.count.to_string(),
                    b.density.to_string(),
                ]);
            }
        }
        let out = Output {
            json: to_json(&report),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        };
        self.emit(&out, true)
    }

    fn train(&mut self, args: &EncodeArgs) -> Result<()> {
        let model_path = require(&self.cli.model, "model", "train")?.to_owned();
        let raw = load_raw(args.input_kind, &args.input)?;
        let spec = self.encoder_spec(args, &raw)?;
        let space = self.space()?;
        let data = spec.build(space, self.cli.policy)?.encode_all(&raw)?;
        let memory = train_single_pass(&data, args.kind.model_kind(), self.cli.policy)?;
        let ev = evaluate(&memory, &data)?;
        let mut training = json!({});
        step(&mut training, json!({ "step": "train", "kind": memory.kind().to_string(), "examples": data.len() }));
        self.save(
            &model_path,
            &SavedModel {
                space,
                policy: self.cli.policy,
                encoder: spec,
                training,
                memory,
            },
        )?;
        let out = summary(json!({
            "examples": data.len(),
            "classes": ev.labels.len(),
            "training_accuracy": ev.accuracy,
            "model": model_path,
        }));
        self.emit(&out, true)
    }

    fn retrain(&mut self, input: &Path, schedule: AdaptSchedule, max_epochs: usize) -> Result<()> {
        let out_path = require(&self.cli.out, "out", "retrain")?.to_owned();
        let mut model = self.load("retrain")?;
        let data = encode_with(&model, input)?;
        let cfg = RetrainConfig {
            schedule,
            max_epochs,
            shuffle_seed: self.cli.seed,
        };
        self.resolved.insert("retrain".into(), to_json(&cfg));
        let mut lines = Vec::new();
        let (memory, report) = retrain_adapthd_observed(&model.memory, &data, &cfg, &mut |e| {
            if let RetrainEvent::Epoch { epoch, accuracy, errors, alpha } = e {
                lines.push(json!({ "epoch": epoch, "accuracy": accuracy, "errors": errors, "alpha": alpha }));
            }
        })?;
        for l in &lines {
            writeln!(self.stdout, "{l}").map_err(|e| HarnessError::io("<stdout>", e))?;
        }
        model.memory = memory;
        step(&mut model.training, json!({ "step": "retrain", "config": cfg, "iterations": report.iterations }));
        self.save(&out_path, &model)?;
        self.emit(&summary(to_json(&report)), false)
    }

    fn quantize(&mut self, input: Option<&Path>, target: QuantTarget, epochs: usize) -> Result<()> {
        let out_path = require(&self.cli.out, "out", "quantize")?.to_owned();
        let mut model = self.load("quantize")?;
        let data = match input {
            Some(p) => encode_with(&model, p)?,
            None if epochs == 0 => Vec::new(),
            None => return Err(HarnessError::Usage("quantize with retraining epochs needs --input".into())),
        };
        let cfg = QuantConfig {
            target,
            epochs,
            shuffle_seed: self.cli.seed,
        };
        self.resolved.insert("quantize".into(), to_json(&cfg));
        let (memory, report) = quantize_model(&model.memory, &data, &cfg)?;
        model.memory = memory;
        step(&mut model.training, json!({ "step": "quantize", "config": cfg }));
        self.save(&out_path, &model)?;
        self.emit(&summary(to_json(&report)), false)
    }

    fn compress(&mut self, segments: usize) -> Result<()> {
        let out_path = require(&self.cli.out, "out", "compress")?.to_owned();
        let mut model = self.load("compress")?;
        let keys = HadamardKeySet::for_dimension(model.space.dim(), segments)?;
        model.memory = compress_model(&model.memory, &keys)?;
        let info = json!({ "step": "compress", "segments": keys.segments(), "segment_dim": keys.segment_dim() });
        step(&mut model.training, info.clone());
        self.save(&out_path, &model)?;
        self.emit(&summary(info), false)
    }

    fn predict(&mut self, input: &Path) -> Result<()> {
        use rayon::prelude::*;
        let model = self.load("predict")?;
        let data = encode_with(&model, input)?;
        let preds = data
            .par_iter()
            .map(|e| model.memory.predict_hv(&e.hv))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut rows = Vec::new();
        let mut json_rows = Vec::new();
        for (i, (p, e)) in preds.iter().zip(&data).enumerate() {
            rows.push(vec![
                i.to_string(),
                p.label.clone(),
                e.label.clone(),
                p.best_score().to_string(),
                p.margin().to_string(),
                p.tie.to_string(),
            ]);
            json_rows.push(json!({
                "row": i, "label": p.label, "truth": e.label, "score": p.best_score(),
                "margin": p.margin(), "tie": p.tie, "scores": p.scores,
            }));
        }
        let out = Output {
            json: json!({ "metric": model.memory.metric().to_string(), "predictions": json_rows }),
            header: ["row", "label", "truth", "score", "margin", "tie"].map(String::from).to_vec(),
            rows,
        };
        self.emit(&out, true)
    }

    fn eval(&mut self, input: &Path) -> Result<()> {
        let model = self.load("eval")?;
        let data = encode_with(&model, input)?;
        let ev = evaluate(&model.memory, &data)?;
        let mut rows = vec![
            vec!["accuracy".into(), String::new(), String::new(), ev.accuracy.to_string()],
            vec!["ties".into(), String::new(), String::new(), ev.ties.to_string()],
        ];
        for (t, row) in ev.confusion.iter().enumerate() {
            for (p, &n) in row.iter().enumerate() {
                rows.push(vec!["confusion".into(), ev.labels[t].clone(), ev.labels[p].clone(), n.to_string()]);
            }
        }
        let out = Output {
            json: to_json(&ev),
            header: ["kind", "truth", "predicted", "value"].map(String::from).to_vec(),
            rows,
        };
        self.emit(&out, true)
    }

    fn bench_char(&mut self, font: Option<&Path>, dims: &[usize], flips: Option<&[f64]>, trials: usize) -> Result<()> {
        let glyphs = match font {
            Some(p) => load_font(p)?,
            None => builtin_font(),
        };
        let pixels = glyphs[0].1.len();
        let spec = CharBenchSpec {
            dims: dims.to_vec(),
            flip_probabilities: flips.map_or_else(|| pixel_fraction_sweep(pixels, 7), <[f64]>::to_vec),
            trials,
            seed: self.cli.seed,
            policy: self.cli.policy,
        };
        self.resolved.insert("bench".into(), to_json(&spec));
        let rows = bench_character(&glyphs, &spec)?;
        let out = Output {
            json: json!({ "glyphs": glyphs.len(), "rows": rows }),
            header: ["dim", "flip_probability", "trials", "accuracy", "ci95"].map(String::from).to_vec(),
            rows: rows
                .iter()
                .map(|r| {
                    vec![
                        r.dim.to_string(),
                        r.flip_probability.to_string(),
                        r.trials.to_string(),
                        r.accuracy.to_string(),
                        r.ci95.to_string(),
                    ]
                })
                .collect(),
        };
        self.emit(&out, true)
    }

    fn bench_lang(&mut self, corpus: Option<&Path>, ngram: usize, lang: LanguageSpec) -> Result<()> {
        let (train, test) = match corpus {
            Some(dir) => load_language_corpus(dir)?,
            None => {
                self.resolved.insert("synthetic_languages".into(), to_json(&lang));
                synthetic_languages(&lang)
            }
        };
        let r = bench_language(&train, &test, ngram, self.cli.dim, self.cli.seed, self.cli.policy)?;
        self.emit(&summary(to_json(&r)), true)
    }

    fn semi_train(&mut self, args: &EncodeArgs, fraction: f64, cfg: SemiConfig, holdout: Option<&Path>) -> Result<()> {
        let model_path = require(&self.cli.model, "model", "semi-train")?.to_owned();
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(HarnessError::Usage(format!("labeled fraction must lie in (0, 1], got {fraction}")));
        }
        let raw = load_raw(args.input_kind, &args.input)?;
        let spec = self.encoder_spec(args, &raw)?;
        let space = self.space()?;
        let encoder = spec.build(space, self.cli.policy)?;
        let mut data = encoder.encode_all(&raw)?;
        let all = data.clone();
        data.shuffle(&mut trial_rng(self.cli.seed, 0));
        let n_labeled = ((fraction * data.len() as f64).ceil() as usize).clamp(1, data.len());
        let unlabeled: Vec<_> = data[n_labeled..].iter().map(|e| e.hv.clone()).collect();
        let held = match holdout {
            Some(p) => encoder.encode_all(&load_raw(args.input_kind, p)?)?,
            None => Vec::new(),
        };
        self.resolved.insert("semi".into(), to_json(&cfg));
        self.resolved.insert("labeled_examples".into(), json!(n_labeled));
        let (memory, report) = semi_supervised_train(&data[..n_labeled], &unlabeled, &held, &cfg)?;
        let ev = evaluate(&memory, &all)?;
        let mut training = json!({});
        step(&mut training, json!({ "step": "semi-train", "config": cfg, "labeled": n_labeled }));
        self.save(
            &model_path,
            &SavedModel {
                space,
                policy: self.cli.policy,
                encoder: spec,
                training,
                memory,
            },
        )?;
        self.emit(&summary(json!({ "report": report, "input_accuracy": ev.accuracy })), true)
    }

    fn dispatch(&mut self) -> Result<()> {
        let cli = self.cli;
        match &cli.command {
            Command::Stats { trials, dims } => self.stats(*trials, dims),
            Command::Train(args) => self.train(args),
            Command::Retrain {
                input,
                schedule,
                alpha_max,
                beta,
                max_epochs,
            } => {
                let (alpha_max, beta) = (*alpha_max, *beta);
                let schedule = match schedule {
                    ScheduleKind::Iteration => AdaptSchedule::IterationDependent { alpha_max, beta },
                    ScheduleKind::Data => AdaptSchedule::DataDependent { alpha_max },
                    ScheduleKind::Hybrid => AdaptSchedule::Hybrid { alpha_max, beta },
                };
                self.retrain(&input.input, schedule, *max_epochs)
            }
            Command::Quantize {
                input,
                target,
                tau,
                epochs,
            } => {
                let target = match target {
                    TargetKind::Binary => QuantTarget::Binary,
                    TargetKind::Bipolar => QuantTarget::Bipolar,
                    TargetKind::Ternary => QuantTarget::Ternary { tau: *tau },
                };
                self.quantize(input.as_deref(), target, *epochs)
            }
            Command::Compress { segments } => self.compress(*segments),
            Command::Predict(a) => self.predict(&a.input),
            Command::Eval(a) => self.eval(&a.input),
            Command::BenchChar {
                font,
                dims,
                flips,
                trials,
            } => self.bench_char(font.as_deref(), dims, flips.as_deref(), *trials),
            Command::BenchLang {
                corpus,
                ngram,
                languages,
                overlap,
                train_sentences,
                test_sentences,
            } => {
                let lang = LanguageSpec {
                    languages: *languages,
                    overlap: *overlap,
                    train_sentences: *train_sentences,
                    test_sentences: *test_sentences,
                    seed: cli.seed,
                    ..LanguageSpec::default()
                };
                self.bench_lang(corpus.as_deref(), *ngram, lang)
            }
            Command::SemiTrain {
                encode,
                labeled_fraction,
                select_percent,
                epsilon,
                holdout,
            } => {
                let cfg = SemiConfig {
                    select_percent: *select_percent,
                    epsilon: *epsilon,
                    kind: encode.kind.model_kind(),
                    policy: cli.policy,
                };
                self.semi_train(encode, *labeled_fraction, cfg, holdout.as_deref())
            }
        }
    }

    fn manifest(&self, argv: &[OsString], status: &str) -> Value {
        json!({
            "tool": "hdc",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.cli.command.name(),
            "argv": argv.iter().map(|a| a.to_string_lossy()).collect::<Vec<_>>(),
            "config": self.cli,
            "seeds": { "master": self.cli.seed, "policy": self.cli.policy.to_string() },
            "resolved": self.resolved,
            "outputs": self.written,
            "status": status,
        })
    }
}

fn manifest_path(cli: &Cli, written: &[PathBuf]) -> Option<PathBuf> {
    cli.manifest.clone().or_else(|| {
        written.last().map(|p| {
            let mut s = p.as_os_str().to_owned();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    })
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render().ansi());
                    1
                }
            };
        }
    };
    let mut run = Run {
        cli: &cli,
        stdout,
        written: Vec::new(),
        resolved: serde_json::Map::new(),
    };
    let result = run.dispatch();
    let status = match &result {
        Ok(()) => "ok".to_owned(),
        Err(e) => format!("error: {e}"),
    };
    let manifest = run.manifest(&argv, &status);
    let manifest_written = match manifest_path(&cli, &run.written) {
        Some(path) => serde_json::to_vec_pretty(&manifest)
            .map_err(|e| e.to_string())
            .and_then(|b| fs::write(&path, b).map_err(|e| format!("{}: {e}", path.display()))),
        None => writeln!(stderr, "{manifest}").map_err(|e| e.to_string()),
    };
    match result {
        Ok(()) => match manifest_written {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: manifest: {e}");
                2
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
