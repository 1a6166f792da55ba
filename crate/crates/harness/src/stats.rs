//! Monte-Carlo distributions of normalized Hamming distance for the basic
//! operations: random pairs, bundles, bindings and permutations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use hdc_core::{bundle, BinaryHv, HvSpace, TiePolicy};

use crate::error::{HarnessError, Result};

pub const DEFAULT_TRIALS: usize = 3000;
pub const DEFAULT_PAIR_DIMS: [usize; 3] = [100, 1000, 10_000];
pub const BIN_WIDTH: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    /// Dimensions of the random-pair experiment.
    pub dimensions: Vec<usize>,
    /// Dimension of the bundle, bind and permute experiments.
    pub operation_dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub policy: TiePolicy,
}

impl ExperimentSpec {
    pub fn new(operation_dim: usize, trials: usize, seed: u64, policy: TiePolicy) -> Self {
        Self {
            name: "stats".into(),
            dimensions: DEFAULT_PAIR_DIMS.to_vec(),
            operation_dim,
            trials,
            seed,
            policy,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(HarnessError::Usage("trials must be at least 1".into()));
        }
        if self.dimensions.is_empty() {
            return Err(HarnessError::Usage("at least one dimension is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub experiment: String,
    pub dim: usize,
    pub trials: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    /// Contiguous bins of width [`BIN_WIDTH`] from the lowest to the highest occupied one.
    pub histogram: Vec<Bin>,
}

impl Distribution {
    pub fn from_samples(experiment: &str, dim: usize, samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let bin_of = |x: f64| ((x / BIN_WIDTH).floor() as usize).min((1.0 / BIN_WIDTH) as usize - 1);
        let (min, max) = samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        let (first, last) = (bin_of(min), bin_of(max));
        let mut counts = vec![0usize; last - first + 1];
        for &x in samples {
            counts[bin_of(x) - first] += 1;
        }
        let histogram = counts
            .into_iter()
            .enumerate()
            .map(|(i, count)| {
                let lo = (first + i) as f64 * BIN_WIDTH;
                Bin {
                    lo,
                    hi: lo + BIN_WIDTH,
                    count,
                    density: count as f64 / (n * BIN_WIDTH),
                }
            })
            .collect();
        Self {
            experiment: experiment.to_owned(),
            dim,
            trials: samples.len(),
            mean,
            std: var.sqrt(),
            min,
            max,
            histogram,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub spec: ExperimentSpec,
    pub distributions: Vec<Distribution>,
}

impl StatsReport {
    pub fn get(&self, experiment: &str, dim: usize) -> Option<&Distribution> {
        self.distributions.iter().find(|d| d.experiment == experiment && d.dim == dim)
    }
}

/// Operand `j` of trial `t` in experiment `id`; indices never collide across experiments.
fn operand(space: &HvSpace, id: u64, trial: usize, j: u64) -> BinaryHv {
    space.random_hv((id << 48) | ((trial as u64) << 4) | j)
}

fn sample<F>(trials: usize, f: F) -> Vec<f64>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    (0..trials).into_par_iter().map(f).collect()
}

fn ham(a: &BinaryHv, b: &BinaryHv) -> f64 {
    a.hamming(b).expect("same space").value
}

pub const RANDOM_PAIRS: &str = "random-pairs";
pub const BUNDLE3: &str = "bundle3";
pub const BUNDLE2_FAVOR_ZERO: &str = "bundle2-favor-zero";
pub const BUNDLE2_FAVOR_ONE: &str = "bundle2-favor-one";
pub const BUNDLE2_RANDOM: &str = "bundle2-random";
pub const BIND: &str = "bind";
pub const PERMUTE: &str = "permute";

/// Bundle of `n` fresh operands compared against its first operand.
fn bundle_samples(space: &HvSpace, id: u64, trials: usize, n: u64, policy: TiePolicy) -> Vec<f64> {
    sample(trials, |t| {
        let ops: Vec<_> = (0..n).map(|j| operand(space, id, t, j)).collect();
        ham(&bundle(&ops, policy).expect("non-empty"), &ops[0])
    })
}

pub fn run_stats(spec: &ExperimentSpec) -> Result<StatsReport> {
    spec.validate()?;
    let mut distributions = Vec::new();
    for &dim in &spec.dimensions {
        let space = HvSpace::new(dim, spec.seed)?;
        let s = sample(spec.trials, |t| ham(&operand(&space, 0, t, 0), &operand(&space, 0, t, 1)));
        distributions.push(Distribution::from_samples(RANDOM_PAIRS, dim, &s));
    }
    let d = spec.operation_dim;
    let space = HvSpace::new(d, spec.seed)?;
    let trials = spec.trials;
    distributions.push(Distribution::from_samples(BUNDLE3, d, &bundle_samples(&space, 1, trials, 3, spec.policy)));
    distributions.push(Distribution::from_samples(
        BUNDLE2_FAVOR_ZERO,
        d,
        &bundle_samples(&space, 2, trials, 2, TiePolicy::FavorZero),
    ));
    // same operands as the favor-zero panel so the two differ only on ties
    distributions.push(Distribution::from_samples(
        BUNDLE2_FAVOR_ONE,
        d,
        &bundle_samples(&space, 2, trials, 2, TiePolicy::FavorOne),
    ));
    if let TiePolicy::RandomExtraVector { .. } = spec.policy {
        distributions.push(Distribution::from_samples(
            BUNDLE2_RANDOM,
            d,
            &bundle_samples(&space, 2, trials, 2, spec.policy),
        ));
    }
    let s = sample(trials, |t| {
        let (a, b) = (operand(&space, 4, t, 0), operand(&space, 4, t, 1));
        ham(&a.bind(&b).expect("same space"), &a)
    });
    distributions.push(Distribution::from_samples(BIND, d, &s));
    let s = sample(trials, |t| {
        let a = operand(&space, 5, t, 0);
        ham(&a, &a.permute(1))
    });
    distributions.push(Distribution::from_samples(PERMUTE, d, &s));
    Ok(StatsReport {
        spec: spec.clone(),
        distributions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_accounts_for_every_sample() {
        let d = Distribution::from_samples("x", 10, &[0.0, 0.5, 0.5, 0.999, 1.0]);
        assert_eq!(d.histogram.iter().map(|b| b.count).sum::<usize>(), 5);
        assert_eq!(d.histogram.first().unwrap().lo, 0.0);
        assert!((d.histogram.last().unwrap().hi - 1.0).abs() < 1e-12);
        let mass: f64 = d.histogram.iter().map(|b| b.density * BIN_WIDTH).sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert!((d.mean - 2.999 / 5.0).abs() < 1e-12);
    }

    #[test]
    fn small_run_has_every_panel_and_is_reproducible() {
        let spec = ExperimentSpec {
            dimensions: vec![100, 1000],
            ..ExperimentSpec::new(1000, 200, 5, TiePolicy::default())
        };
        let r = run_stats(&spec).unwrap();
        for name in [RANDOM_PAIRS, BUNDLE3, BUNDLE2_FAVOR_ZERO, BUNDLE2_FAVOR_ONE, BUNDLE2_RANDOM, BIND, PERMUTE] {
            assert!(r.get(name, 1000).is_some(), "{name}");
        }
        assert!(r.get(RANDOM_PAIRS, 100).is_some());
        assert_eq!(r, run_stats(&spec).unwrap());
        // either tie rule agrees with A on about half of the tie bits
        let (z, o) = (r.get(BUNDLE2_FAVOR_ZERO, 1000).unwrap(), r.get(BUNDLE2_FAVOR_ONE, 1000).unwrap());
        assert!((z.mean - 0.25).abs() < 0.02 && (o.mean - 0.25).abs() < 0.02);
    }

    #[test]
    fn invalid_specs_are_usage_errors() {
        let mut spec = ExperimentSpec::new(100, 0, 1, TiePolicy::default());
        assert!(matches!(run_stats(&spec), Err(HarnessError::Usage(_))));
        spec.trials = 1;
        spec.dimensions.clear();
        assert!(matches!(run_stats(&spec), Err(HarnessError::Usage(_))));
    }
}
