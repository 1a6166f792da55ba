//! Self-training: grow the labeled pool with the model's most confident
//! predictions on unlabeled data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hv::{BinaryHv, TiePolicy};

use super::adapt::TrainingReport;
use super::model::{label_set, train_single_pass_with_labels, AssociativeMemory, Labeled, ModelKind};
use super::{accuracy, label_indices};

pub const DEFAULT_SELECT_PERCENT: f64 = 5.0;
pub const DEFAULT_EPSILON: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiConfig {
    /// Share of the initial unlabeled set moved per iteration, in `(0, 100]`.
    pub select_percent: f64,
    /// Stop once held-out accuracy moves by less than this between iterations.
    pub epsilon: f64,
    pub kind: ModelKind,
    pub policy: TiePolicy,
}

impl Default for SemiConfig {
    fn default() -> Self {
        Self {
            select_percent: DEFAULT_SELECT_PERCENT,
            epsilon: DEFAULT_EPSILON,
            kind: ModelKind::IntegerCentroid,
            policy: TiePolicy::default(),
        }
    }
}

/// Confidence is the winner's margin over the runner-up. Accuracy is measured
/// on `heldout`, or on the original labeled set when `heldout` is empty.
pub fn semi_supervised_train(
    labeled: &[Labeled],
    unlabeled: &[BinaryHv],
    heldout: &[Labeled],
    cfg: &SemiConfig,
) -> Result<(AssociativeMemory, TrainingReport)> {
    if labeled.is_empty() {
        return Err(Error::EmptyInput("labeled pool"));
    }
    if !(cfg.select_percent > 0.0 && cfg.select_percent <= 100.0) {
        return Err(Error::InvalidParameter(format!(
            "select percent must lie in (0, 100], got {}",
            cfg.select_percent
        )));
    }
    if !(cfg.epsilon.is_finite() && cfg.epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be non-negative, got {}", cfg.epsilon)));
    }
    let check = if heldout.is_empty() { labeled } else { heldout };
    let label_list = label_set(labeled);
    let per_step = ((cfg.select_percent / 100.0 * unlabeled.len() as f64).ceil() as usize).max(1);

    let mut pool = labeled.to_vec();
    let mut remaining: Vec<usize> = (0..unlabeled.len()).collect();
    let mut report = TrainingReport::new(f64::NAN, 0);
    loop {
        let am = train_single_pass_with_labels(&pool, &label_list, cfg.kind, cfg.policy)?;
        let acc = accuracy(&am, check, &label_indices(&am, check)?)?;
        let previous = report.accuracy_trace.last().copied();
        report.push_epoch(acc, 0.0);
        report.pool_trace.push(pool.len());
        if report.iterations == 1 {
            report.initial_accuracy = acc;
        }
        let stable = previous.is_some_and(|p| (acc - p).abs() < cfg.epsilon);
        if remaining.is_empty() || stable {
            report.converged = true;
            report.alpha_trace.clear();
            return Ok((am, report));
        }
        let mut ranked = remaining
            .iter()
            .map(|&i| Ok((i, am.predict_hv(&unlabeled[i])?)))
            .collect::<Result<Vec<_>>>()?;
        // most confident first; index order among equals keeps runs reproducible
        ranked.sort_by(|a, b| b.1.margin().total_cmp(&a.1.margin()).then(a.0.cmp(&b.0)));
        let take = per_step.min(ranked.len());
        for (i, p) in ranked.drain(..take) {
            pool.push(Labeled::new(p.label, unlabeled[i].clone()));
        }
        remaining = ranked.into_iter().map(|(i, _)| i).collect();
        remaining.sort_unstable();
    }
}
