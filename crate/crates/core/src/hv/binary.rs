use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::similarity::{Metric, Similarity};
use super::check_dims;
use crate::error::{Error, Result};

/// A `d`-bit binary hypervector.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryHv {
    dim: usize,
    words: Vec<u64>,
}

fn tail_mask(dim: usize) -> u64 {
    match dim % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl BinaryHv {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            words: vec![0; dim.div_ceil(64)],
        }
    }

    pub fn ones(dim: usize) -> Self {
        Self::zeros(dim).complement()
    }

    /// Builds a hypervector from packed words, rejecting a wrong word count
    /// or set padding bits.
    pub fn from_words(dim: usize, words: Vec<u64>) -> Result<Self> {
        if words.len() != dim.div_ceil(64) {
            return Err(Error::Parse(format!(
                "{} words cannot hold exactly {dim} bits",
                words.len()
            )));
        }
        let hv = Self { dim, words };
        if !hv.padding_is_clear() {
            return Err(Error::Parse("padding bits above the dimension are set".into()));
        }
        Ok(hv)
    }

    pub(crate) fn from_words_unchecked(dim: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), dim.div_ceil(64));
        let hv = Self { dim, words };
        debug_assert!(hv.padding_is_clear());
        hv
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut dim = 0;
        for bit in bits {
            if dim % 64 == 0 {
                words.push(0);
            }
            if bit {
                words[dim / 64] |= 1 << (dim % 64);
            }
            dim += 1;
        }
        Self { dim, words }
    }

    /// Parses a string of `0`/`1` characters, component 0 first. Whitespace is
    /// ignored so the `0 0 1 0 ...` layout used in worked examples parses too.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(bits))
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.dim, "component {i} out of range for dimension {}", self.dim);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.dim, "component {i} out of range for dimension {}", self.dim);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.dim, "component {i} out of range for dimension {}", self.dim);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.dim).map(move |i| (self.words[i / 64] >> (i % 64)) & 1 == 1)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn padding_is_clear(&self) -> bool {
        self.words.last().is_none_or(|&w| w & !tail_mask(self.dim) == 0)
    }

    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(self.dim);
        }
        Self {
            dim: self.dim,
            words,
        }
    }

    /// Binding: componentwise XOR. Self-inverse and commutative.
    pub fn bind(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Self {
            dim: self.dim,
            words,
        })
    }

    pub fn bind_assign(&mut self, other: &Self) -> Result<()> {
        check_dims(self.dim, other.dim)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Circular rotation by `k` positions: component `i` moves to
    /// `(i + k) mod d`. Any integer `k` is accepted.
    pub fn permute(&self, k: i64) -> Self {
        let shift = k.rem_euclid(self.dim as i64) as usize;
        if shift == 0 {
            return self.clone();
        }
        let mut words = vec![0u64; self.words.len()];
        for (w, out) in words.iter_mut().enumerate() {
            let first = w * 64;
            let len = (self.dim - first).min(64);
            let start = (first + self.dim - shift) % self.dim;
            *out = self.read_wrapping(start, len);
        }
        Self {
            dim: self.dim,
            words,
        }
    }

    pub fn inverse_permute(&self, k: i64) -> Self {
        self.permute(-k)
    }

    /// Number of differing components.
    pub fn hamming_count(&self, other: &Self) -> Result<usize> {
        check_dims(self.dim, other.dim)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    /// Normalized Hamming distance: `popcount(a ^ b) / d`.
    pub fn hamming(&self, other: &Self) -> Result<Similarity> {
        let count = self.hamming_count(other)?;
        Ok(Similarity::new(Metric::Hamming, count as f64 / self.dim as f64))
    }

    /// Canonical debugging text: `hv<d>:` then each word as 16 hex digits,
    /// word 0 first, most significant nibble first within a word.
    pub fn to_hex_string(&self) -> String {
        let mut s = format!("hv{}:", self.dim);
        for w in &self.words {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    // `len <= 64`, `start + len <= dim`.
    fn read_bits(&self, start: usize, len: usize) -> u64 {
        let wi = start / 64;
        let off = start % 64;
        let mut v = self.words[wi] >> off;
        if off != 0 && wi + 1 < self.words.len() {
            v |= self.words[wi + 1] << (64 - off);
        }
        if len < 64 {
            v &= (1u64 << len) - 1;
        }
        v
    }

    fn read_wrapping(&self, start: usize, len: usize) -> u64 {
        let head = len.min(self.dim - start);
        let mut v = self.read_bits(start, head);
        if head < len {
            v |= self.read_bits(0, len - head) << head;
        }
        v
    }
}

impl fmt::Debug for BinaryHv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim <= 64 {
            write!(f, "BinaryHv({})", self.to_bit_string())
        } else {
            write!(f, "BinaryHv(d={}, ones={})", self.dim, self.count_ones())
        }
    }
}

impl fmt::Display for BinaryHv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex_string())
    }
}

impl FromStr for BinaryHv {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rest = s
            .strip_prefix("hv")
            .ok_or_else(|| Error::Parse("missing `hv` header".into()))?;
        let (dim, hex) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse("missing `:` after dimension".into()))?;
        let dim: usize = dim
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension {dim:?}")))?;
        if hex.len() != dim.div_ceil(64) * 16 || !hex.is_ascii() {
            return Err(Error::Parse(format!(
                "expected {} hex digits for dimension {dim}",
                dim.div_ceil(64) * 16
            )));
        }
        let words = (0..hex.len() / 16)
            .map(|i| {
                u64::from_str_radix(&hex[i * 16..(i + 1) * 16], 16)
                    .map_err(|e| Error::Parse(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_words(dim, words)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const A: &str = "0000110011";
    const B: &str = "1011000101";

    fn hv(s: &str) -> BinaryHv {
        BinaryHv::from_bit_str(s).unwrap()
    }

    fn naive_rotate(a: &BinaryHv, k: i64) -> BinaryHv {
        let d = a.dim() as i64;
        let mut out = BinaryHv::zeros(a.dim());
        for i in 0..d {
            out.set(((i + k).rem_euclid(d)) as usize, a.get(i as usize));
        }
        out
    }

    fn arb_hv() -> impl Strategy<Value = BinaryHv> {
        prop::collection::vec(any::<bool>(), 8..300).prop_map(BinaryHv::from_bits)
    }

    #[test]
    fn worked_bind() {
        assert_eq!(hv(A).bind(&hv(B)).unwrap().to_bit_string(), "1011110110");
    }

    #[test]
    fn self_bind_is_zero() {
        assert_eq!(hv(A).bind(&hv(A)).unwrap(), BinaryHv::zeros(10));
    }

    #[test]
    fn worked_rotation() {
        let a = hv(A);
        let r = a.permute(1);
        assert_eq!(r.to_bit_string(), "1000011001");
        assert_eq!(a.hamming(&r).unwrap().value, 0.4);
    }

    #[test]
    fn rotation_identities() {
        let a = hv(A);
        assert_eq!(a.permute(0), a);
        assert_eq!(a.permute(10), a);
        assert_eq!(a.permute(-3), a.permute(7));
    }

    #[test]
    fn worked_hamming() {
        let a = hv(A);
        assert_eq!(a.hamming(&a).unwrap().value, 0.0);
        assert_eq!(a.hamming(&a.complement()).unwrap().value, 1.0);
        // A ^ B = 1011110110 has seven set bits
        assert_eq!(a.hamming(&hv(B)).unwrap().value, 0.7);
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let err = hv(A).bind(&BinaryHv::zeros(11)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 10, found: 11 });
        assert!(hv(A).hamming(&BinaryHv::zeros(12)).is_err());
    }

    #[test]
    fn complement_keeps_padding_clear() {
        let z = BinaryHv::zeros(70).complement();
        assert!(z.padding_is_clear());
        assert_eq!(z.count_ones(), 70);
    }

    #[test]
    fn hex_text_round_trip_and_rejects_garbage() {
        let a = BinaryHv::from_bits((0..130).map(|i| i % 3 == 0));
        let text = a.to_string();
        assert!(text.starts_with("hv130:"));
        assert_eq!(text.parse::<BinaryHv>().unwrap(), a);
        assert!("hv10:0000000000000400".parse::<BinaryHv>().is_err()); // padding bit
        assert!("hv10:00".parse::<BinaryHv>().is_err());
        assert!("10:0000000000000000".parse::<BinaryHv>().is_err());
    }

    #[test]
    fn from_words_validates() {
        assert!(BinaryHv::from_words(10, vec![1 << 10]).is_err());
        assert!(BinaryHv::from_words(10, vec![0, 0]).is_err());
        assert!(BinaryHv::from_words(10, vec![0b11]).is_ok());
    }

    proptest! {
        #[test]
        fn permute_matches_naive_rotation(a in arb_hv(), k in -1000i64..1000) {
            let r = a.permute(k);
            prop_assert!(r.padding_is_clear());
            prop_assert_eq!(&r, &naive_rotate(&a, k));
            prop_assert_eq!(r.inverse_permute(k), a);
        }

        #[test]
        fn permute_composes(a in arb_hv(), k1 in -500i64..500, k2 in -500i64..500) {
            prop_assert_eq!(a.permute(k1 + k2), a.permute(k1).permute(k2));
        }

        #[test]
        fn bind_algebra(bits in prop::collection::vec(any::<(bool, bool, bool)>(), 8..200), k in 0i64..64) {
            let a = BinaryHv::from_bits(bits.iter().map(|t| t.0));
            let b = BinaryHv::from_bits(bits.iter().map(|t| t.1));
            let c = BinaryHv::from_bits(bits.iter().map(|t| t.2));
            let ab = a.bind(&b).unwrap();
            prop_assert_eq!(ab.bind(&b).unwrap(), a.clone());
            prop_assert_eq!(&ab, &b.bind(&a).unwrap());
            prop_assert_eq!(ab.bind(&c).unwrap(), a.bind(&b.bind(&c).unwrap()).unwrap());
            prop_assert_eq!(ab.permute(k), a.permute(k).bind(&b.permute(k)).unwrap());
        }

        #[test]
        fn hamming_is_a_metric(bits in prop::collection::vec(any::<(bool, bool, bool)>(), 8..200)) {
            let a = BinaryHv::from_bits(bits.iter().map(|t| t.0));
            let b = BinaryHv::from_bits(bits.iter().map(|t| t.1));
            let c = BinaryHv::from_bits(bits.iter().map(|t| t.2));
            let ab = a.hamming(&b).unwrap().value;
            prop_assert_eq!(ab, b.hamming(&a).unwrap().value);
            prop_assert!((0.0..=1.0).contains(&ab));
            let ac = a.hamming(&c).unwrap().value;
            let cb = c.hamming(&b).unwrap().value;
            prop_assert!(ab <= ac + cb + 1e-12);
        }
    }
}
