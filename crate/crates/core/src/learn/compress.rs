//! Model compression by superposing class segments under orthogonal keys.
//!
//! A `d`-component vector is cut into `s` segments of `D` components (the
//! last one zero-padded) and collapsed to `C' = Σ_i P_i ∘ C^i`. Because the
//! keys are orthogonal, `C'·Q'` keeps the segment-wise products
//! `Σ_i C^i·Q^i` plus cross terms that average out for unrelated segments.

use crate::error::{Error, Result};
use crate::hv::BinaryHv;
use crate::memory::HadamardKeySet;

use super::model::{AssociativeMemory, ClassVector, ModelKind};

pub fn compress_vector(v: &[i32], keys: &HadamardKeySet) -> Result<Vec<i32>> {
    let seg = keys.segment_dim();
    let capacity = keys.segments() * seg;
    if v.len() > capacity {
        return Err(Error::DimensionMismatch {
            expected: capacity,
            found: v.len(),
        });
    }
    let mut out = vec![0i32; seg];
    for (chunk, key) in v.chunks(seg).zip(keys.keys()) {
        for ((o, &x), &p) in out.iter_mut().zip(chunk).zip(key.values()) {
            *o += x * i32::from(p);
        }
    }
    Ok(out)
}

/// Compresses the bipolar view of a binary query.
pub fn compress_query(q: &BinaryHv, keys: &HadamardKeySet) -> Result<Vec<i32>> {
    let bipolar: Vec<i32> = q.iter().map(|b| if b { -1 } else { 1 }).collect();
    compress_vector(&bipolar, keys)
}

/// Compresses every class; binary models are compressed through their bipolar view.
pub fn compress_model(am: &AssociativeMemory, keys: &HadamardKeySet) -> Result<AssociativeMemory> {
    if matches!(am.kind(), ModelKind::Compressed { .. }) {
        return Err(Error::KindMismatch("model is already compressed".into()));
    }
    let kind = ModelKind::Compressed {
        segments: keys.segments(),
        segment_dim: keys.segment_dim(),
    };
    let vectors = am
        .classes()
        .iter()
        .map(|c| Ok((ClassVector::Compressed(compress_vector(&c.vector.to_integers(), keys)?), None)))
        .collect::<Result<Vec<_>>>()?;
    am.with_vectors(kind, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::{HvSpace, TiePolicy};
    use crate::learn::{train_single_pass, Labeled};
    use proptest::prelude::*;

    fn toy_model(dim: usize, seed: u64) -> (HvSpace, AssociativeMemory) {
        let s = HvSpace::new(dim, seed).unwrap();
        let data: Vec<_> = (0..20).map(|i| Labeled::new(format!("c{}", i % 4), s.random_hv(i))).collect();
        (s, train_single_pass(&data, ModelKind::IntegerCentroid, TiePolicy::default()).unwrap())
    }

    #[test]
    fn one_segment_keeps_scores_exactly() {
        let (s, am) = toy_model(10_000, 4);
        let keys = HadamardKeySet::for_dimension(10_000, 1).unwrap();
        let c = compress_model(&am, &keys).unwrap();
        for q in 100..120 {
            let q = s.random_hv(q);
            assert_eq!(am.predict_hv(&q).unwrap().scores, c.predict_hv(&q).unwrap().scores);
        }
    }

    #[test]
    fn two_segment_dot_is_segment_sum_plus_cross_terms() {
        let s = HvSpace::new(2048, 5).unwrap();
        let keys = HadamardKeySet::for_dimension(2048, 2).unwrap();
        let int = |hv: &BinaryHv| -> Vec<i64> { hv.iter().map(|b| if b { -1 } else { 1 }).collect() };
        let mut cross_total = 0.0;
        let trials = 400;
        for t in 0..trials {
            let (a, b) = (s.random_hv(2 * t), s.random_hv(2 * t + 1));
            let (ca, cb) = (compress_query(&a, &keys).unwrap(), compress_query(&b, &keys).unwrap());
            let compressed: i64 = ca.iter().zip(&cb).map(|(&x, &y)| i64::from(x) * i64::from(y)).sum();
            let (va, vb) = (int(&a), int(&b));
            let (p0, p1) = (keys.key(0).values(), keys.key(1).values());
            let (mut direct, mut cross) = (0i64, 0i64);
            for j in 0..1024 {
                direct += va[j] * vb[j] + va[1024 + j] * vb[1024 + j];
                let key = i64::from(p0[j]) * i64::from(p1[j]);
                cross += key * (va[j] * vb[1024 + j] + va[1024 + j] * vb[j]);
            }
            assert_eq!(compressed, direct + cross);
            cross_total += cross as f64;
        }
        // each cross term has standard deviation sqrt(2 * 1024) ≈ 45
        let mean = cross_total / trials as f64;
        assert!(mean.abs() < 4.0 * 45.0 / (trials as f64).sqrt(), "mean cross term {mean}");
    }

    #[test]
    fn dimension_and_kind_errors() {
        let keys = HadamardKeySet::sylvester(2, 16).unwrap();
        assert!(compress_vector(&[1; 33], &keys).is_err());
        assert_eq!(compress_vector(&[1; 20], &keys).unwrap().len(), 16);
        let (_, am) = toy_model(10_000, 1);
        let keys = HadamardKeySet::for_dimension(10_000, 20).unwrap();
        let c = compress_model(&am, &keys).unwrap();
        assert_eq!(c.classes()[0].vector.len(), 512);
        assert!(compress_model(&c, &keys).is_err());
        assert!(compress_model(&am, &HadamardKeySet::sylvester(2, 16).unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn compression_is_linear(
            a in proptest::collection::vec(-1000i32..1000, 100),
            b in proptest::collection::vec(-1000i32..1000, 100),
            s in 1usize..8,
        ) {
            let keys = HadamardKeySet::for_dimension(100, s).unwrap();
            let sum: Vec<i32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let (ca, cb) = (compress_vector(&a, &keys).unwrap(), compress_vector(&b, &keys).unwrap());
            let expect: Vec<i32> = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
            prop_assert_eq!(compress_vector(&sum, &keys).unwrap(), expect);
        }
    }
}
