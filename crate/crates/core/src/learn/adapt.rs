//! Perceptron-style retraining of centroid models with an adaptive step.
//!
//! For every misclassified encoding `H`, the true class gains `αH` and the
//! predicted class loses it. The step `α` comes from an [`AdaptSchedule`]:
//!
//! - `IterationDependent`: starts at `alpha_max`; after each epoch it halves
//!   when the error rate fell below the mean of the previous `beta` epochs,
//!   and doubles (capped at `alpha_max`) otherwise. Never below 1.
//! - `DataDependent`: `round(alpha_max · (1 − cos_correct) / 2)`, so points
//!   far from their own class take larger steps. Never below 1.
//! - `Hybrid`: the iteration-dependent step scaled by the same data factor.
//!
//! Training stops once the last three epochs each changed training accuracy
//! by less than [`CONVERGENCE_DELTA`], or at the epoch cap.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::keyed_rng;

use super::model::{AssociativeMemory, Labeled, ModelKind};
use super::{accuracy, label_indices};

pub const DEFAULT_ALPHA_MAX: u32 = 10;
pub const DEFAULT_BETA: usize = 3;
pub const DEFAULT_MAX_EPOCHS: usize = 50;
pub const CONVERGENCE_DELTA: f64 = 0.001;
pub const CONVERGENCE_WINDOW: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdaptSchedule {
    IterationDependent { alpha_max: u32, beta: usize },
    DataDependent { alpha_max: u32 },
    Hybrid { alpha_max: u32, beta: usize },
}

impl Default for AdaptSchedule {
    fn default() -> Self {
        AdaptSchedule::Hybrid {
            alpha_max: DEFAULT_ALPHA_MAX,
            beta: DEFAULT_BETA,
        }
    }
}

impl AdaptSchedule {
    pub fn alpha_max(self) -> u32 {
        match self {
            AdaptSchedule::IterationDependent { alpha_max, .. }
            | AdaptSchedule::DataDependent { alpha_max }
            | AdaptSchedule::Hybrid { alpha_max, .. } => alpha_max,
        }
    }

    fn beta(self) -> Option<usize> {
        match self {
            AdaptSchedule::IterationDependent { beta, .. } | AdaptSchedule::Hybrid { beta, .. } => Some(beta),
            AdaptSchedule::DataDependent { .. } => None,
        }
    }

    pub fn validate(self) -> Result<()> {
        if self.alpha_max() == 0 || self.alpha_max() > i32::MAX as u32 {
            return Err(Error::InvalidParameter(format!("alpha_max must be positive, got {}", self.alpha_max())));
        }
        if self.beta() == Some(0) {
            return Err(Error::InvalidParameter("beta must be at least 1".into()));
        }
        Ok(())
    }

    fn data_factor(self) -> bool {
        !matches!(self, AdaptSchedule::IterationDependent { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetrainConfig {
    pub schedule: AdaptSchedule,
    pub max_epochs: usize,
    /// Epoch `e` visits the data in the order of a shuffle keyed by `(shuffle_seed, e)`.
    pub shuffle_seed: u64,
}

impl Default for RetrainConfig {
    fn default() -> Self {
        Self {
            schedule: AdaptSchedule::default(),
            max_epochs: DEFAULT_MAX_EPOCHS,
            shuffle_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingReport {
    pub iterations: usize,
    /// Accuracy after each iteration, on the training data for retraining
    /// and on the held-out data for self-training.
    pub accuracy_trace: Vec<f64>,
    pub converged: bool,
    /// Mean step applied in each epoch (the scheduled step if nothing was missed).
    pub alpha_trace: Vec<f64>,
    pub initial_accuracy: f64,
    pub shuffle_seed: u64,
    /// Labeled pool size at each self-training iteration; empty otherwise.
    pub pool_trace: Vec<usize>,
}

impl TrainingReport {
    pub(crate) fn new(initial_accuracy: f64, shuffle_seed: u64) -> Self {
        Self {
            iterations: 0,
            accuracy_trace: Vec::new(),
            converged: false,
            alpha_trace: Vec::new(),
            initial_accuracy,
            shuffle_seed,
            pool_trace: Vec::new(),
        }
    }

    pub(crate) fn push_epoch(&mut self, accuracy: f64, alpha: f64) {
        self.iterations += 1;
        self.accuracy_trace.push(accuracy);
        self.alpha_trace.push(alpha);
    }

    /// Last [`CONVERGENCE_WINDOW`] epoch-to-epoch accuracy changes all below the threshold,
    /// counting the initial accuracy as epoch 0.
    fn plateaued(&self) -> bool {
        let mut accs = vec![self.initial_accuracy];
        accs.extend(&self.accuracy_trace);
        accs.len() > CONVERGENCE_WINDOW
            && accs[accs.len() - CONVERGENCE_WINDOW - 1..]
                .windows(2)
                .all(|w| (w[1] - w[0]).abs() < CONVERGENCE_DELTA)
    }
}

/// Progress notifications from [`retrain_adapthd_observed`].
#[derive(Debug)]
pub enum RetrainEvent<'a> {
    Update {
        epoch: usize,
        correct: usize,
        wrong: usize,
        alpha: i32,
        model: &'a AssociativeMemory,
    },
    Epoch {
        epoch: usize,
        accuracy: f64,
        errors: usize,
        alpha: f64,
    },
}

pub fn retrain_adapthd(
    am: &AssociativeMemory,
    data: &[Labeled],
    cfg: &RetrainConfig,
) -> Result<(AssociativeMemory, TrainingReport)> {
    retrain_adapthd_observed(am, data, cfg, &mut |_| {})
}

pub fn retrain_adapthd_observed(
    am: &AssociativeMemory,
    data: &[Labeled],
    cfg: &RetrainConfig,
    observer: &mut dyn FnMut(&RetrainEvent<'_>),
) -> Result<(AssociativeMemory, TrainingReport)> {
    if am.kind() != ModelKind::IntegerCentroid {
        return Err(Error::KindMismatch(format!("retraining needs an integer model, got {}", am.kind())));
    }
    cfg.schedule.validate()?;
    if cfg.max_epochs == 0 {
        return Err(Error::InvalidParameter("max_epochs must be positive".into()));
    }
    let labels = label_indices(am, data)?;
    let mut model = am.clone();
    let initial = accuracy(&model, data, &labels)?;
    let mut report = TrainingReport::new(initial, cfg.shuffle_seed);
    let alpha_max = cfg.schedule.alpha_max() as i32;
    let mut step = alpha_max;
    let mut errors_hist = vec![1.0 - initial];
    let mut order: Vec<usize> = (0..data.len()).collect();

    for epoch in 1..=cfg.max_epochs {
        order.shuffle(&mut keyed_rng(cfg.shuffle_seed, epoch as u64));
        let (mut errors, mut alpha_sum) = (0usize, 0i64);
        for &i in &order {
            let p = model.predict_hv(&data[i].hv)?;
            let y = labels[i];
            if p.index == y {
                continue;
            }
            let alpha = if cfg.schedule.data_factor() {
                let factor = (1.0 - p.scores[y]) / 2.0;
                ((f64::from(step) * factor).round() as i32).max(1)
            } else {
                step
            };
            model.adapt_update(y, p.index, &data[i].hv, alpha)?;
            observer(&RetrainEvent::Update {
                epoch,
                correct: y,
                wrong: p.index,
                alpha,
                model: &model,
            });
            errors += 1;
            alpha_sum += i64::from(alpha);
        }
        let acc = accuracy(&model, data, &labels)?;
        let mean_alpha = if errors == 0 {
            f64::from(step)
        } else {
            alpha_sum as f64 / errors as f64
        };
        report.push_epoch(acc, mean_alpha);
        observer(&RetrainEvent::Epoch {
            epoch,
            accuracy: acc,
            errors,
            alpha: mean_alpha,
        });

        if let Some(beta) = cfg.schedule.beta() {
            let err = 1.0 - acc;
            let recent = &errors_hist[errors_hist.len().saturating_sub(beta)..];
            let previous = recent.iter().sum::<f64>() / recent.len() as f64;
            step = if err < previous {
                (step / 2).max(1)
            } else {
                step.saturating_mul(2).min(alpha_max)
            };
            errors_hist.push(err);
        }
        if report.plateaued() {
            report.converged = true;
            break;
        }
    }
    Ok((model, report))
}
