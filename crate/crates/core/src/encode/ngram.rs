//! N-gram encoding and text profiles.

use super::symbolic::{encode_sequence, SymbolSequence};
use crate::error::{Error, Result};
use crate::hv::{Accumulator, BinaryHv, TiePolicy};
use crate::memory::ItemMemory;

/// The 26 lowercase letters followed by the space.
pub const ALPHABET: &str = "abcdefghijklmnopqrstuvwxyz ";

/// Lowercases, maps every non-letter to a space, collapses runs of spaces
/// and trims both ends.
pub fn normalize_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for c in text.chars().flat_map(char::to_lowercase) {
        if c.is_ascii_lowercase() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        } else {
            pending_space = true;
        }
    }
    out
}

/// `ρ^{N−1}(S_1) ⊕ … ⊕ ρ(S_{N−1}) ⊕ S_N`; the first symbol is rotated most.
///
/// This is the same composition as [`encode_sequence`].
pub fn encode_ngram(window: &SymbolSequence, im: &ItemMemory) -> Result<BinaryHv> {
    encode_sequence(window, im)
}

pub fn encode_text_profile(text: &str, n: usize, im: &ItemMemory, policy: TiePolicy) -> Result<BinaryHv> {
    TextEncoder::new(im, n)?.profile(text, policy)
}

/// Letter N-gram encoder with the rotated letter vectors precomputed.
#[derive(Debug, Clone)]
pub struct TextEncoder {
    n: usize,
    dim: usize,
    // rotated[letter][k] = ρ^k(letter)
    rotated: Vec<Vec<BinaryHv>>,
}

impl TextEncoder {
    pub fn new(im: &ItemMemory, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n-gram size must be at least 1".into()));
        }
        let rotated = ALPHABET
            .chars()
            .map(|c| {
                let base = im.get(&c.to_string());
                (0..n).map(|k| base.permute(k as i64)).collect()
            })
            .collect();
        Ok(Self {
            n,
            dim: im.dim(),
            rotated,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Normalized text as indices into [`ALPHABET`].
    pub fn letter_indices(text: &str) -> Vec<u8> {
        normalize_text(text)
            .bytes()
            .map(|b| if b == b' ' { 26 } else { b - b'a' })
            .collect()
    }

    /// The N-gram vector of a window of alphabet indices (length `n`).
    pub fn ngram(&self, window: &[u8]) -> BinaryHv {
        debug_assert_eq!(window.len(), self.n);
        let mut out = self.rotated[window[0] as usize][self.n - 1].clone();
        for (j, &letter) in window.iter().enumerate().skip(1) {
            out.bind_assign(&self.rotated[letter as usize][self.n - 1 - j])
                .expect("letters share a dimension");
        }
        out
    }

    /// Adds every sliding N-gram of `text` to `acc`. Windows never wrap.
    pub fn accumulate(&self, text: &str, acc: &mut Accumulator) -> Result<()> {
        let letters = Self::letter_indices(text);
        if letters.len() < self.n {
            return Err(Error::InputTooShort {
                needed: self.n,
                found: letters.len(),
            });
        }
        for window in letters.windows(self.n) {
            acc.add(&self.ngram(window))?;
        }
        Ok(())
    }

    pub fn accumulator(&self, text: &str) -> Result<Accumulator> {
        let mut acc = Accumulator::new(self.dim);
        self.accumulate(text, &mut acc)?;
        Ok(acc)
    }

    /// Thresholded sum of all N-gram vectors in `text`.
    pub fn profile(&self, text: &str, policy: TiePolicy) -> Result<BinaryHv> {
        self.accumulator(text)?.threshold(policy)
    }
}
