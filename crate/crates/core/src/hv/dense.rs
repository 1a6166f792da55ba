use serde::{Deserialize, Serialize};

use super::binary::BinaryHv;
use super::check_dims;
use super::similarity::{Metric, Similarity};
use crate::error::{Error, Result};

/// Read access to the integer components of a dense vector.
pub trait DenseVector {
    fn dim(&self) -> usize;
    fn components(&self) -> impl Iterator<Item = i32> + '_;
}

/// A vector over {−1, +1}. Bit 0 corresponds to +1 and bit 1 to −1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipolarHv {
    values: Vec<i8>,
}

impl BipolarHv {
    pub fn from_values(values: Vec<i8>) -> Result<Self> {
        if let Some((index, &v)) = values.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
            return Err(Error::InvalidComponent {
                kind: "bipolar",
                index,
                value: i64::from(v),
            });
        }
        Ok(Self { values })
    }

    /// Sign of each integer, with 0 mapped to +1.
    pub fn from_signs(values: &[i32]) -> Self {
        Self {
            values: values.iter().map(|&v| if v < 0 { -1 } else { 1 }).collect(),
        }
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn negate(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// Componentwise product (bipolar binding).
    pub fn bind(&self, other: &Self) -> Result<Self> {
        check_dims(self.values.len(), other.values.len())?;
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }
}

impl From<&BinaryHv> for BipolarHv {
    fn from(hv: &BinaryHv) -> Self {
        Self {
            values: hv.iter().map(|b| if b { -1 } else { 1 }).collect(),
        }
    }
}

impl From<&BipolarHv> for BinaryHv {
    fn from(hv: &BipolarHv) -> Self {
        BinaryHv::from_bits(hv.values.iter().map(|&v| v < 0))
    }
}

impl BinaryHv {
    pub fn to_bipolar(&self) -> BipolarHv {
        BipolarHv::from(self)
    }
}

impl BipolarHv {
    pub fn to_binary(&self) -> BinaryHv {
        BinaryHv::from(self)
    }
}

/// A vector over {−1, 0, +1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TernaryHv {
    values: Vec<i8>,
}

impl TernaryHv {
    pub fn from_values(values: Vec<i8>) -> Result<Self> {
        if let Some((index, &v)) = values.iter().enumerate().find(|(_, &v)| !(-1..=1).contains(&v)) {
            return Err(Error::InvalidComponent {
                kind: "ternary",
                index,
                value: i64::from(v),
            });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn zeros(&self) -> usize {
        self.values.iter().filter(|&&v| v == 0).count()
    }
}

impl DenseVector for BipolarHv {
    fn dim(&self) -> usize {
        self.values.len()
    }
    fn components(&self) -> impl Iterator<Item = i32> + '_ {
        self.values.iter().map(|&v| i32::from(v))
    }
}

impl DenseVector for TernaryHv {
    fn dim(&self) -> usize {
        self.values.len()
    }
    fn components(&self) -> impl Iterator<Item = i32> + '_ {
        self.values.iter().map(|&v| i32::from(v))
    }
}

impl DenseVector for [i32] {
    fn dim(&self) -> usize {
        self.len()
    }
    fn components(&self) -> impl Iterator<Item = i32> + '_ {
        self.iter().copied()
    }
}

impl DenseVector for Vec<i32> {
    fn dim(&self) -> usize {
        self.len()
    }
    fn components(&self) -> impl Iterator<Item = i32> + '_ {
        self.iter().copied()
    }
}

fn raw_dot<A, B>(a: &A, b: &B) -> Result<i64>
where
    A: DenseVector + ?Sized,
    B: DenseVector + ?Sized,
{
    check_dims(a.dim(), b.dim())?;
    Ok(a
        .components()
        .zip(b.components())
        .map(|(x, y)| i64::from(x) * i64::from(y))
        .sum())
}

fn norm_squared<A: DenseVector + ?Sized>(a: &A) -> i64 {
    a.components().map(|x| i64::from(x) * i64::from(x)).sum()
}

pub fn dot<A, B>(a: &A, b: &B) -> Result<Similarity>
where
    A: DenseVector + ?Sized,
    B: DenseVector + ?Sized,
{
    Ok(Similarity::new(Metric::Dot, raw_dot(a, b)? as f64))
}

/// `a·b / (|a||b|)`, an error if either operand is all zeros.
pub fn cosine<A, B>(a: &A, b: &B) -> Result<Similarity>
where
    A: DenseVector + ?Sized,
    B: DenseVector + ?Sized,
{
    let num = raw_dot(a, b)?;
    let (na, nb) = (norm_squared(a), norm_squared(b));
    if na == 0 || nb == 0 {
        return Err(Error::ZeroMagnitude);
    }
    // product of squared norms keeps sqrt exact for perfect squares
    let denom = ((na as f64) * (nb as f64)).sqrt();
    let value = (num as f64 / denom).clamp(-1.0, 1.0);
    Ok(Similarity::new(Metric::Cosine, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::{bundle, HvSpace, TiePolicy};

    #[test]
    fn bipolar_mapping_is_definitional() {
        let a = BinaryHv::from_bit_str("0000110011").unwrap();
        assert_eq!(a.to_bipolar().values(), &[1, 1, 1, 1, -1, -1, 1, 1, -1, -1]);
    }

    #[test]
    fn round_trips_on_worked_vectors() {
        for s in ["0000110011", "1011000101", "0010101101"] {
            let a = BinaryHv::from_bit_str(s).unwrap();
            assert_eq!(a.to_bipolar().to_binary(), a);
        }
    }

    #[test]
    fn domains_are_enforced() {
        assert!(BipolarHv::from_values(vec![1, -1, 0]).is_err());
        assert!(TernaryHv::from_values(vec![1, -1, 0]).is_ok());
        assert_eq!(
            TernaryHv::from_values(vec![1, 2]).unwrap_err(),
            Error::InvalidComponent { kind: "ternary", index: 1, value: 2 }
        );
    }

    #[test]
    fn cosine_poles_and_scale_invariance() {
        let space = HvSpace::new(1000, 1).unwrap();
        let a = space.random_hv(0).to_bipolar();
        let b = space.random_hv(1).to_bipolar();
        assert_eq!(cosine(&a, &a).unwrap().value, 1.0);
        assert_eq!(cosine(&a, &a.negate()).unwrap().value, -1.0);
        let av: Vec<i32> = a.components().collect();
        let scaled: Vec<i32> = av.iter().map(|x| 7 * x).collect();
        let c1 = cosine(&av, &b).unwrap().value;
        let c2 = cosine(&scaled, &b).unwrap().value;
        assert!((c1 - c2).abs() < 1e-12);
    }

    #[test]
    fn cosine_rejects_zero_vector() {
        let zero = vec![0i32; 10];
        let a = BinaryHv::zeros(10).to_bipolar();
        assert_eq!(cosine(&zero, &a), Err(Error::ZeroMagnitude));
        assert_eq!(dot(&zero, &a).unwrap().value, 0.0);
    }

    #[test]
    fn random_bipolar_pairs_are_orthogonal() {
        let space = HvSpace::new(10_000, 2).unwrap();
        for i in 0..20 {
            let c = cosine(&space.random_hv(2 * i).to_bipolar(), &space.random_hv(2 * i + 1).to_bipolar())
                .unwrap()
                .value;
            assert!(c.abs() <= 0.04, "{c}");
        }
    }

    #[test]
    fn hamming_cosine_identity_on_random_pairs() {
        let space = HvSpace::new(1_000, 5).unwrap();
        for i in 0..100 {
            let (a, b) = (space.random_hv(2 * i), space.random_hv(2 * i + 1));
            let (pa, pb) = (a.to_bipolar(), b.to_bipolar());
            // integer form of the identity is exact: d - 2*ham = dot
            let ham = a.hamming_count(&b).unwrap() as i64;
            let d = dot(&pa, &pb).unwrap().value as i64;
            assert_eq!(1000 - 2 * ham, d);
            let h = a.hamming(&b).unwrap().value;
            let c = cosine(&pa, &pb).unwrap().value;
            assert!((h - (1.0 - c) / 2.0).abs() < 1e-15, "{h} vs {c}");
        }
    }

    #[test]
    fn bipolar_bind_matches_xor() {
        let space = HvSpace::new(100, 5).unwrap();
        let (a, b) = (space.random_hv(0), space.random_hv(1));
        assert_eq!(a.to_bipolar().bind(&b.to_bipolar()).unwrap().to_binary(), a.bind(&b).unwrap());
        let _ = bundle([&a], TiePolicy::FavorZero);
    }
}
