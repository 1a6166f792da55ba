//! Record-based encoding: each feature position is bound to its quantized level.

use crate::error::{Error, Result};
use crate::hv::{Accumulator, BinaryHv, TiePolicy};
use crate::memory::{ContinuousItemMemory, ItemMemory};

/// A non-empty vector of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("feature vector"));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature { index });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Item-memory symbol of the `i`-th (zero-based) feature position.
pub fn position_symbol(i: usize) -> String {
    format!("ID_{}", i + 1)
}

/// `[L̄_1 ⊕ ID_1 + … + L̄_N ⊕ ID_N]`.
pub fn encode_record_features(
    features: &FeatureVector,
    im: &ItemMemory,
    cim: &ContinuousItemMemory,
    policy: TiePolicy,
) -> Result<BinaryHv> {
    if im.dim() != cim.space().dim() {
        return Err(Error::DimensionMismatch {
            expected: im.dim(),
            found: cim.space().dim(),
        });
    }
    let mut acc = Accumulator::new(im.dim());
    for (i, &v) in features.values().iter().enumerate() {
        let mut term = im.get(&position_symbol(i));
        term.bind_assign(cim.get(v))?;
        acc.add(&term)?;
    }
    acc.threshold(policy)
}

/// Owns the memories of a record encoder.
#[derive(Debug, Clone)]
pub struct RecordEncoder {
    im: ItemMemory,
    cim: ContinuousItemMemory,
    policy: TiePolicy,
}

impl RecordEncoder {
    pub fn new(im: ItemMemory, cim: ContinuousItemMemory, policy: TiePolicy) -> Result<Self> {
        if im.dim() != cim.space().dim() {
            return Err(Error::DimensionMismatch {
                expected: im.dim(),
                found: cim.space().dim(),
            });
        }
        Ok(Self { im, cim, policy })
    }

    pub fn item_memory(&self) -> &ItemMemory {
        &self.im
    }

    pub fn level_memory(&self) -> &ContinuousItemMemory {
        &self.cim
    }

    pub fn policy(&self) -> TiePolicy {
        self.policy
    }

    pub fn encode(&self, features: &FeatureVector) -> Result<BinaryHv> {
        encode_record_features(features, &self.im, &self.cim, self.policy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::HvSpace;
    use crate::memory::LevelConfig;

    fn memories(d: usize, m: usize) -> (ItemMemory, ContinuousItemMemory) {
        let space = HvSpace::new(d, 21).unwrap();
        let cim = ContinuousItemMemory::from_config(space, LevelConfig::new(m, -1.0, 1.0, 5)).unwrap();
        (ItemMemory::new(space), cim)
    }

    #[test]
    fn single_feature_is_one_binding() {
        let (im, cim) = memories(1000, 10);
        let fv = FeatureVector::new(vec![0.3]).unwrap();
        let h = encode_record_features(&fv, &im, &cim, TiePolicy::FavorZero).unwrap();
        assert_eq!(h, cim.get(0.3).bind(&im.get("ID_1")).unwrap());
    }

    #[test]
    fn identical_inputs_encode_identically() {
        let (im, cim) = memories(1000, 10);
        let enc = RecordEncoder::new(im, cim, TiePolicy::default()).unwrap();
        let fv = FeatureVector::new(vec![0.1, -0.5, 0.9, 0.0]).unwrap();
        assert_eq!(enc.encode(&fv).unwrap(), enc.encode(&fv.clone()).unwrap());
    }

    #[test]
    fn rejects_bad_features() {
        assert_eq!(FeatureVector::new(vec![]), Err(Error::EmptyInput("feature vector")));
        assert_eq!(
            FeatureVector::new(vec![1.0, f64::INFINITY]),
            Err(Error::NonFiniteFeature { index: 1 })
        );
        assert!(FeatureVector::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn one_feature_change_in_617_moves_little() {
        let (im, cim) = memories(10_000, 10);
        let values: Vec<f64> = (0..617).map(|i| ((i * 37) % 200) as f64 / 100.0 - 1.0).collect();
        let mut changed = values.clone();
        // move feature 100 up by one level
        changed[100] += 0.2;
        let a = encode_record_features(&FeatureVector::new(values).unwrap(), &im, &cim, TiePolicy::default()).unwrap();
        let b = encode_record_features(&FeatureVector::new(changed).unwrap(), &im, &cim, TiePolicy::default()).unwrap();
        let h = a.hamming(&b).unwrap().value;
        assert!(h > 0.0 && h < 0.01, "{h}");
    }

    #[test]
    fn distance_grows_with_perturbed_features() {
        let (im, cim) = memories(10_000, 10);
        let enc = RecordEncoder::new(im, cim, TiePolicy::default()).unwrap();
        let base: Vec<f64> = (0..64).map(|i| ((i * 13) % 20) as f64 / 10.0 - 1.0).collect();
        let h0 = enc.encode(&FeatureVector::new(base.clone()).unwrap()).unwrap();
        let mut last = 0.0;
        for k in [4, 16, 32, 64] {
            let mut v = base.clone();
            for x in v.iter_mut().take(k) {
                *x = -*x;
            }
            let h = h0.hamming(&enc.encode(&FeatureVector::new(v).unwrap()).unwrap()).unwrap().value;
            assert!(h > last, "k={k}: {h} <= {last}");
            last = h;
        }
    }
}
