//! Structured data built from bind, bundle and permute alone.

use crate::error::{Error, Result};
use crate::hv::{bundle, BinaryHv, TiePolicy};
use crate::memory::ItemMemory;

/// A non-empty ordered list of symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence(Vec<String>);

impl SymbolSequence {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyInput("symbol sequence"));
        }
        Ok(Self(symbols))
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `x = a` as `X ⊕ A`.
pub fn encode_pair(variable: &BinaryHv, value: &BinaryHv) -> Result<BinaryHv> {
    variable.bind(value)
}

/// Recovers the value bound to `variable`; exact because `X ⊕ X` cancels.
pub fn release(pair: &BinaryHv, variable: &BinaryHv) -> Result<BinaryHv> {
    pair.bind(variable)
}

pub fn encode_set<'a, I>(members: I, policy: TiePolicy) -> Result<BinaryHv>
where
    I: IntoIterator<Item = &'a BinaryHv>,
{
    bundle(members, policy)
}

/// `[X⊕A + Y⊕B + …]` over `(field, value)` pairs.
pub fn encode_record(pairs: &[(&BinaryHv, &BinaryHv)], policy: TiePolicy) -> Result<BinaryHv> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput("record"));
    }
    let bound = pairs
        .iter()
        .map(|(field, value)| field.bind(value))
        .collect::<Result<Vec<_>>>()?;
    bundle(&bound, policy)
}

/// A noisy copy of the value bound to `field`; clean it up by nearest-neighbour search.
pub fn extract_field(record: &BinaryHv, field: &BinaryHv) -> Result<BinaryHv> {
    field.bind(record)
}

/// `ρ(prefix) ⊕ next`.
pub fn extend_sequence(prefix: &BinaryHv, next: &BinaryHv) -> Result<BinaryHv> {
    prefix.permute(1).bind(next)
}

/// Folds [`extend_sequence`] over the symbols, so `(a, b, c)` becomes
/// `ρ(ρ(A)) ⊕ ρ(B) ⊕ C`: earlier symbols are rotated more.
pub fn encode_sequence(symbols: &SymbolSequence, im: &ItemMemory) -> Result<BinaryHv> {
    let mut iter = symbols.symbols().iter();
    let first = iter.next().ok_or(Error::EmptyInput("symbol sequence"))?;
    iter.try_fold(im.get(first), |acc, s| extend_sequence(&acc, &im.get(s)))
}

/// Recovers the first element of an `n`-element sequence from the sequence
/// vector and the encoding of its last `n−1` elements:
/// `ρ^{−(n−1)}(seq ⊕ suffix)`.
pub fn extract_first(sequence: &BinaryHv, suffix: &BinaryHv, n: usize) -> Result<BinaryHv> {
    if n == 0 {
        return Err(Error::EmptyInput("sequence"));
    }
    Ok(sequence.bind(suffix)?.inverse_permute(n as i64 - 1))
}
