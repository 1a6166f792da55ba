use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hv::{check_dims, Accumulator, BinaryHv, BipolarHv, Metric, TernaryHv, TiePolicy};
use crate::memory::HadamardKeySet;

use super::compress::compress_query;

/// An encoded training or test example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeled {
    pub label: String,
    pub hv: BinaryHv,
}

impl Labeled {
    pub fn new(label: impl Into<String>, hv: BinaryHv) -> Self {
        Self {
            label: label.into(),
            hv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// Per-class integer sums of bipolar encodings, searched by cosine.
    IntegerCentroid,
    /// Thresholded class vectors, searched by Hamming distance.
    Binary,
    /// ±1 class vectors, searched by cosine.
    Bipolar,
    /// {−1, 0, +1} class vectors, searched by dot product.
    Ternary,
    /// Hadamard-keyed superposition of `segments` class segments of
    /// `segment_dim` components each, searched by cosine.
    Compressed { segments: usize, segment_dim: usize },
}

impl ModelKind {
    pub fn metric(self) -> Metric {
        match self {
            ModelKind::Binary => Metric::Hamming,
            ModelKind::Ternary => Metric::Dot,
            ModelKind::IntegerCentroid | ModelKind::Bipolar | ModelKind::Compressed { .. } => Metric::Cosine,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::IntegerCentroid => "integer",
            ModelKind::Binary => "binary",
            ModelKind::Bipolar => "bipolar",
            ModelKind::Ternary => "ternary",
            ModelKind::Compressed { .. } => "compressed",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Compressed { segments, segment_dim } => write!(f, "compressed:{segments}x{segment_dim}"),
            kind => f.write_str(kind.name()),
        }
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "integer" | "centroid" => ModelKind::IntegerCentroid,
            "binary" => ModelKind::Binary,
            "bipolar" => ModelKind::Bipolar,
            "ternary" => ModelKind::Ternary,
            other => {
                let spec = other
                    .strip_prefix("compressed:")
                    .ok_or_else(|| Error::Parse(format!("unknown model kind `{other}`")))?;
                let (s, d) = spec
                    .split_once('x')
                    .ok_or_else(|| Error::Parse(format!("expected compressed:<s>x<D>, got `{other}`")))?;
                let parse = |v: &str| v.parse::<usize>().map_err(|e| Error::Parse(format!("`{v}`: {e}")));
                ModelKind::Compressed {
                    segments: parse(s)?,
                    segment_dim: parse(d)?,
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassVector {
    Integer(Vec<i32>),
    Binary(BinaryHv),
    Bipolar(BipolarHv),
    Ternary(TernaryHv),
    Compressed(Vec<i32>),
}

impl ClassVector {
    pub fn len(&self) -> usize {
        match self {
            ClassVector::Integer(v) | ClassVector::Compressed(v) => v.len(),
            ClassVector::Binary(hv) => hv.dim(),
            ClassVector::Bipolar(hv) => hv.values().len(),
            ClassVector::Ternary(hv) => hv.values().len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn matches(&self, kind: ModelKind) -> bool {
        matches!(
            (self, kind),
            (ClassVector::Integer(_), ModelKind::IntegerCentroid)
                | (ClassVector::Binary(_), ModelKind::Binary)
                | (ClassVector::Bipolar(_), ModelKind::Bipolar)
                | (ClassVector::Ternary(_), ModelKind::Ternary)
                | (ClassVector::Compressed(_), ModelKind::Compressed { .. })
        )
    }

    /// Components as integers, binary vectors through the bipolar mapping.
    pub fn to_integers(&self) -> Vec<i32> {
        match self {
            ClassVector::Integer(v) | ClassVector::Compressed(v) => v.clone(),
            ClassVector::Binary(hv) => hv.iter().map(|b| if b { -1 } else { 1 }).collect(),
            ClassVector::Bipolar(hv) => hv.values().iter().map(|&x| i32::from(x)).collect(),
            ClassVector::Ternary(hv) => hv.values().iter().map(|&x| i32::from(x)).collect(),
        }
    }
}

/// One stored class: its label, the searched vector and, for models derived
/// from training, the integer accumulator it was projected from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEntry {
    pub label: String,
    pub vector: ClassVector,
    pub accumulator: Option<Vec<i32>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    Binary(BinaryHv),
    Bipolar(BipolarHv),
    /// Already compressed with the model's key set.
    Compressed(Vec<i32>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub index: usize,
    pub label: String,
    pub metric: Metric,
    /// One score per class, in class order.
    pub scores: Vec<f64>,
    /// Another class scored exactly as well; `index` is the lowest such class.
    pub tie: bool,
}

impl Prediction {
    pub fn best_score(&self) -> f64 {
        self.scores[self.index]
    }

    /// Distance from the winner to the runner-up, positive whenever the
    /// winner is strictly closer. Zero for a single-class model.
    pub fn margin(&self) -> f64 {
        let best = self.best_score();
        let runner_up = self
            .scores
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.index)
            .map(|(_, &s)| s)
            .reduce(|a, b| if self.metric.higher_is_closer() { a.max(b) } else { a.min(b) });
        match runner_up {
            None => 0.0,
            Some(r) if self.metric.higher_is_closer() => best - r,
            Some(r) => r - best,
        }
    }
}

/// The searched set of class vectors.
///
/// Classes are kept sorted by label, so class indices, tie-breaks and
/// confusion-matrix rows are reproducible regardless of training order.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociativeMemory {
    kind: ModelKind,
    dim: usize,
    classes: Vec<ClassEntry>,
}

impl AssociativeMemory {
    /// `dim` is the encoding dimension; compressed class vectors instead have
    /// the kind's segment length.
    pub fn new(kind: ModelKind, dim: usize, mut classes: Vec<ClassEntry>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::EmptyInput("class list"));
        }
        classes.sort_by(|a, b| a.label.cmp(&b.label));
        if let Some(w) = classes.windows(2).find(|w| w[0].label == w[1].label) {
            return Err(Error::InvalidParameter(format!("duplicate class label `{}`", w[0].label)));
        }
        let vector_len = match kind {
            ModelKind::Compressed { segments, segment_dim } => {
                HadamardKeySet::sylvester(segments, segment_dim)?;
                if segments * segment_dim < dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: segments * segment_dim,
                    });
                }
                segment_dim
            }
            _ => dim,
        };
        for c in &classes {
            if !c.vector.matches(kind) {
                return Err(Error::KindMismatch(format!("class `{}` does not hold a {kind} vector", c.label)));
            }
            check_dims(vector_len, c.vector.len())?;
            if let Some(acc) = &c.accumulator {
                check_dims(dim, acc.len())?;
            }
        }
        Ok(Self { kind, dim, classes })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn metric(&self) -> Metric {
        self.kind.metric()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn classes(&self) -> &[ClassEntry] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.classes.iter().map(|c| c.label.as_str())
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.classes
            .binary_search_by(|c| c.label.as_str().cmp(label))
            .map_err(|_| Error::UnknownLabel(label.to_owned()))
    }

    /// Integer source vectors: the centroids themselves, or the accumulators
    /// a projected model was derived from.
    pub fn integer_vectors(&self) -> Result<Vec<Vec<i32>>> {
        self.classes
            .iter()
            .map(|c| match (&c.vector, &c.accumulator) {
                (ClassVector::Integer(v), _) => Ok(v.clone()),
                (_, Some(acc)) => Ok(acc.clone()),
                _ => Err(Error::KindMismatch(format!("class `{}` has no integer accumulator", c.label))),
            })
            .collect()
    }

    pub fn keys(&self) -> Result<Option<HadamardKeySet>> {
        match self.kind {
            ModelKind::Compressed { segments, segment_dim } => Ok(Some(HadamardKeySet::sylvester(segments, segment_dim)?)),
            _ => Ok(None),
        }
    }

    /// Wraps an encoding as a query suited to this model, compressing it if needed.
    pub fn query(&self, hv: &BinaryHv) -> Result<Query> {
        check_dims(self.dim, hv.dim())?;
        match self.keys()? {
            Some(keys) => Ok(Query::Compressed(compress_query(hv, &keys)?)),
            None => Ok(Query::Binary(hv.clone())),
        }
    }

    pub fn scores(&self, query: &Query) -> Result<Vec<f64>> {
        let binary;
        let q = match (query, self.kind) {
            (Query::Compressed(q), ModelKind::Compressed { segment_dim, .. }) => {
                check_dims(segment_dim, q.len())?;
                return Ok(self
                    .classes
                    .iter()
                    .map(|c| match &c.vector {
                        ClassVector::Compressed(v) => int_cosine(v, q),
                        _ => unreachable!("validated at construction"),
                    })
                    .collect());
            }
            (Query::Compressed(_), kind) => {
                return Err(Error::KindMismatch(format!("compressed query against a {kind} model")));
            }
            (_, ModelKind::Compressed { .. }) => {
                return Err(Error::KindMismatch("compressed model needs a compressed query".into()));
            }
            (Query::Binary(hv), _) => hv,
            (Query::Bipolar(hv), _) => {
                binary = hv.to_binary();
                &binary
            }
        };
        check_dims(self.dim, q.dim())?;
        let d = self.dim as f64;
        Ok(self
            .classes
            .iter()
            .map(|c| match &c.vector {
                ClassVector::Integer(v) => {
                    let norm = v.iter().map(|&x| i64::from(x) * i64::from(x)).sum::<i64>();
                    if norm == 0 {
                        0.0
                    } else {
                        (signed_dot(v, q) as f64 / (norm as f64 * d).sqrt()).clamp(-1.0, 1.0)
                    }
                }
                ClassVector::Binary(hv) => hv.hamming_count(q).expect("dims checked") as f64 / d,
                ClassVector::Bipolar(hv) => signed_dot(hv.values(), q) as f64 / d,
                ClassVector::Ternary(hv) => signed_dot(hv.values(), q) as f64,
                ClassVector::Compressed(_) => unreachable!("handled above"),
            })
            .collect())
    }

    /// Nearest class; exact score ties go to the lowest label and are flagged.
    pub fn predict(&self, query: &Query) -> Result<Prediction> {
        let scores = self.scores(query)?;
        let metric = self.metric();
        let mut index = 0;
        let mut tie = false;
        for (i, &s) in scores.iter().enumerate().skip(1) {
            let best = scores[index];
            let closer = if metric.higher_is_closer() { s > best } else { s < best };
            if closer {
                index = i;
                tie = false;
            } else if s == best {
                tie = true;
            }
        }
        Ok(Prediction {
            index,
            label: self.classes[index].label.clone(),
            metric,
            scores,
            tie,
        })
    }

    pub fn predict_hv(&self, hv: &BinaryHv) -> Result<Prediction> {
        self.predict(&self.query(hv)?)
    }

    /// One retraining step on a centroid model: `C_correct += αH`,
    /// `C_wrong −= αH`, with `H` the bipolar view of `hv`.
    pub fn adapt_update(&mut self, correct: usize, wrong: usize, hv: &BinaryHv, alpha: i32) -> Result<()> {
        if self.kind != ModelKind::IntegerCentroid {
            return Err(Error::KindMismatch(format!("retraining needs an integer model, got {}", self.kind)));
        }
        check_dims(self.dim, hv.dim())?;
        let k = self.classes.len();
        if correct >= k || wrong >= k {
            return Err(Error::InvalidParameter(format!("class index out of range for {k} classes")));
        }
        if correct == wrong {
            return Ok(());
        }
        for target in [(correct, alpha), (wrong, -alpha)] {
            let (c, a) = target;
            let ClassVector::Integer(v) = &mut self.classes[c].vector else {
                unreachable!("validated at construction")
            };
            for (i, x) in v.iter_mut().enumerate() {
                let h = if hv.get(i) { -a } else { a };
                *x = x.checked_add(h).ok_or(Error::AccumulatorOverflow)?;
            }
        }
        Ok(())
    }

    /// Replaces the class vectors while keeping labels and order.
    pub(crate) fn with_vectors(&self, kind: ModelKind, vectors: Vec<(ClassVector, Option<Vec<i32>>)>) -> Result<Self> {
        let classes = self
            .classes
            .iter()
            .zip(vectors)
            .map(|(c, (vector, accumulator))| ClassEntry {
                label: c.label.clone(),
                vector,
                accumulator,
            })
            .collect();
        Self::new(kind, self.dim, classes)
    }
}

/// `Σ v_i · (1 − 2 q_i)`: the inner product with the bipolar view of `q`.
fn signed_dot<T: Copy + Into<i64>>(v: &[T], q: &BinaryHv) -> i64 {
    let total: i64 = v.iter().map(|&x| x.into()).sum();
    let mut ones = 0i64;
    for (w, &word) in q.words().iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            ones += v[w * 64 + bits.trailing_zeros() as usize].into();
            bits &= bits - 1;
        }
    }
    total - 2 * ones
}

/// Cosine of integer vectors; a zero vector scores 0.
pub(crate) fn int_cosine(a: &[i32], b: &[i32]) -> f64 {
    let (mut dot, mut na, mut nb) = (0i64, 0i64, 0i64);
    for (&x, &y) in a.iter().zip(b) {
        let (x, y) = (i64::from(x), i64::from(y));
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0 || nb == 0 {
        return 0.0;
    }
    (dot as f64 / ((na as f64) * (nb as f64)).sqrt()).clamp(-1.0, 1.0)
}

/// Sorted distinct labels of `examples`.
pub fn label_set(examples: &[Labeled]) -> Vec<String> {
    let mut labels: Vec<String> = examples.iter().map(|e| e.label.clone()).collect();
    labels.sort();
    labels.dedup();
    labels
}

/// Single-pass training over the labels present in `examples`.
pub fn train_single_pass(examples: &[Labeled], kind: ModelKind, policy: TiePolicy) -> Result<AssociativeMemory> {
    train_single_pass_with_labels(examples, &label_set(examples), kind, policy)
}

/// Single-pass training over a fixed label set; every label needs an example.
///
/// `IntegerCentroid` keeps the per-class bipolar sums; `Binary` thresholds
/// each class's bundle and keeps the sums as its accumulator.
pub fn train_single_pass_with_labels(
    examples: &[Labeled],
    labels: &[String],
    kind: ModelKind,
    policy: TiePolicy,
) -> Result<AssociativeMemory> {
    if !matches!(kind, ModelKind::IntegerCentroid | ModelKind::Binary) {
        return Err(Error::KindMismatch(format!(
            "single-pass training builds integer or binary models, not {kind}; quantize or compress afterwards"
        )));
    }
    let first = examples.first().ok_or(Error::EmptyInput("training set"))?;
    let dim = first.hv.dim();
    let mut sorted = labels.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(Error::EmptyInput("label set"));
    }
    let mut accs = vec![Accumulator::new(dim); sorted.len()];
    for e in examples {
        let i = sorted
            .binary_search(&e.label)
            .map_err(|_| Error::UnknownLabel(e.label.clone()))?;
        accs[i].add(&e.hv)?;
    }
    let classes = sorted
        .into_iter()
        .zip(accs)
        .map(|(label, acc)| {
            if acc.is_empty() {
                return Err(Error::EmptyClass(label));
            }
            let sums = acc.bipolar_sums();
            let (vector, accumulator) = match kind {
                ModelKind::Binary => (ClassVector::Binary(acc.threshold(policy)?), Some(sums)),
                _ => (ClassVector::Integer(sums), None),
            };
            Ok(ClassEntry {
                label,
                vector,
                accumulator,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    AssociativeMemory::new(kind, dim, classes)
}
