//! Projection of integer centroids onto binary, bipolar or ternary models,
//! with retraining of the integer model between projections.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hv::{BinaryHv, BipolarHv, TernaryHv};
use crate::rng::keyed_rng;

use super::adapt::TrainingReport;
use super::model::{AssociativeMemory, ClassVector, Labeled, ModelKind};
use super::{accuracy, label_indices};

pub const DEFAULT_TAU: f64 = 0.5;
pub const DEFAULT_QUANT_EPOCHS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QuantTarget {
    /// Bit 1 where a component is below the class median; components equal
    /// to the median fall back to their sign.
    Binary,
    /// Sign of each component, 0 mapping to +1.
    Bipolar,
    /// 0 within `tau` standard deviations of the class mean (strictly),
    /// otherwise the sign of the deviation.
    Ternary { tau: f64 },
}

impl QuantTarget {
    pub fn kind(self) -> ModelKind {
        match self {
            QuantTarget::Binary => ModelKind::Binary,
            QuantTarget::Bipolar => ModelKind::Bipolar,
            QuantTarget::Ternary { .. } => ModelKind::Ternary,
        }
    }

    fn validate(self) -> Result<()> {
        match self {
            QuantTarget::Ternary { tau } if !(tau.is_finite() && tau >= 0.0) => {
                Err(Error::InvalidParameter(format!("ternary tau must be finite and non-negative, got {tau}")))
            }
            _ => Ok(()),
        }
    }
}

fn sign(x: i32) -> i8 {
    if x < 0 {
        -1
    } else {
        1
    }
}

fn median(v: &[i32]) -> f64 {
    let mut s = v.to_vec();
    s.sort_unstable();
    let n = s.len();
    if n % 2 == 1 {
        f64::from(s[n / 2])
    } else {
        (f64::from(s[n / 2 - 1]) + f64::from(s[n / 2])) / 2.0
    }
}

pub fn project_vector(v: &[i32], target: QuantTarget) -> Result<ClassVector> {
    target.validate()?;
    Ok(match target {
        QuantTarget::Binary => {
            let m = median(v);
            ClassVector::Binary(BinaryHv::from_bits(v.iter().map(|&x| {
                let x = f64::from(x);
                x < m || (x == m && x < 0.0)
            })))
        }
        QuantTarget::Bipolar => ClassVector::Bipolar(BipolarHv::from_signs(v)),
        QuantTarget::Ternary { tau } => {
            let n = v.len() as f64;
            let mean = v.iter().map(|&x| f64::from(x)).sum::<f64>() / n;
            let var = v.iter().map(|&x| (f64::from(x) - mean).powi(2)).sum::<f64>() / n;
            let band = tau * var.sqrt();
            let values = v
                .iter()
                .map(|&x| {
                    let dev = f64::from(x) - mean;
                    if dev.abs() < band {
                        0
                    } else if dev > 0.0 {
                        1
                    } else if dev < 0.0 {
                        -1
                    } else {
                        sign(x)
                    }
                })
                .collect();
            ClassVector::Ternary(TernaryHv::from_values(values)?)
        }
    })
}

/// Projects the model's integer vectors; the result keeps them as accumulators,
/// so projecting it again reproduces it exactly.
pub fn project(am: &AssociativeMemory, target: QuantTarget) -> Result<AssociativeMemory> {
    let vectors = am
        .integer_vectors()?
        .into_iter()
        .map(|v| Ok((project_vector(&v, target)?, Some(v))))
        .collect::<Result<Vec<_>>>()?;
    am.with_vectors(target.kind(), vectors)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantConfig {
    pub target: QuantTarget,
    pub epochs: usize,
    pub shuffle_seed: u64,
}

impl QuantConfig {
    pub fn new(target: QuantTarget) -> Self {
        Self {
            target,
            epochs: DEFAULT_QUANT_EPOCHS,
            shuffle_seed: 0,
        }
    }
}

/// Quantization with retraining.
///
/// Each epoch predicts with the current projected model and, for every
/// miss, applies a unit update to the integer model; the integer model is
/// re-projected at the end of the epoch. The projection with the best
/// training accuracy (earliest on ties) is returned. Stops early once an
/// epoch makes no mistakes.
pub fn quantize_model(
    am: &AssociativeMemory,
    data: &[Labeled],
    cfg: &QuantConfig,
) -> Result<(AssociativeMemory, TrainingReport)> {
    if am.kind() != ModelKind::IntegerCentroid {
        return Err(Error::KindMismatch(format!("quantization starts from an integer model, got {}", am.kind())));
    }
    cfg.target.validate()?;
    let labels = label_indices(am, data)?;
    let mut integer = am.clone();
    let mut projected = project(&integer, cfg.target)?;
    let initial_accuracy = accuracy(&projected, data, &labels)?;
    let mut best = (initial_accuracy, projected.clone());
    let mut report = TrainingReport::new(initial_accuracy, cfg.shuffle_seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut keyed_rng(cfg.shuffle_seed, epoch as u64));
        let mut errors = 0;
        for &i in &order {
            let p = projected.predict_hv(&data[i].hv)?;
            if p.index != labels[i] {
                errors += 1;
                integer.adapt_update(labels[i], p.index, &data[i].hv, 1)?;
            }
        }
        projected = project(&integer, cfg.target)?;
        let acc = accuracy(&projected, data, &labels)?;
        report.push_epoch(acc, 1.0);
        if acc > best.0 {
            best = (acc, projected.clone());
        }
        if errors == 0 {
            report.converged = true;
            break;
        }
    }
    Ok((best.1, report))
}
