//! Associative-memory classifiers over encoded hypervectors.
//!
//! [`train_single_pass`] builds one class vector per label. Centroid models
//! can then be retrained ([`retrain_adapthd`]), projected to low-precision
//! models ([`quantize_model`]) or compressed under Hadamard keys
//! ([`compress_model`]). [`semi_supervised_train`] grows a small labeled set
//! by self-training.

mod adapt;
mod alarm;
mod compress;
mod eval;
mod model;
mod quant;
mod semi;

pub use adapt::{
    retrain_adapthd, retrain_adapthd_observed, AdaptSchedule, RetrainConfig, RetrainEvent, TrainingReport,
    CONVERGENCE_DELTA, CONVERGENCE_WINDOW, DEFAULT_ALPHA_MAX, DEFAULT_BETA, DEFAULT_MAX_EPOCHS,
};
pub use alarm::{seizure_alarm_postprocess, AlarmConfig, AlarmEvent, WindowState, DEFAULT_CONSECUTIVE};
pub use compress::{compress_model, compress_query, compress_vector};
pub use eval::{evaluate, Evaluation};
pub use model::{
    label_set, train_single_pass, train_single_pass_with_labels, AssociativeMemory, ClassEntry, ClassVector,
    Labeled, ModelKind, Prediction, Query,
};
pub use quant::{project, project_vector, quantize_model, QuantConfig, QuantTarget, DEFAULT_QUANT_EPOCHS, DEFAULT_TAU};
pub use semi::{semi_supervised_train, SemiConfig, DEFAULT_EPSILON, DEFAULT_SELECT_PERCENT};

use crate::error::Result;

fn label_indices(am: &AssociativeMemory, data: &[Labeled]) -> Result<Vec<usize>> {
    data.iter().map(|e| am.index_of(&e.label)).collect()
}

/// Fraction of `data` predicted as `labels`; 1.0 for empty data.
fn accuracy(am: &AssociativeMemory, data: &[Labeled], labels: &[usize]) -> Result<f64> {
    if data.is_empty() {
        return Ok(1.0);
    }
    let mut correct = 0;
    for (e, &y) in data.iter().zip(labels) {
        correct += usize::from(am.predict_hv(&e.hv)?.index == y);
    }
    Ok(correct as f64 / data.len() as f64)
}
