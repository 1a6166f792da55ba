//! Versioned binary model files; the byte layout is specified in
//! `MODEL_FORMAT.md` at the crate root.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use hdc_core::learn::{AssociativeMemory, ClassEntry, ClassVector, ModelKind};
use hdc_core::{BinaryHv, BipolarHv, HvSpace, Metric, TernaryHv, TiePolicy};

use crate::encoding::EncoderSpec;
use crate::error::{HarnessError, Result};

pub const MAGIC: &[u8; 4] = b"HDCM";
pub const FORMAT_VERSION: u16 = 1;

/// Everything needed to encode new inputs and query the model.
#[derive(Debug, Clone, PartialEq)]
pub struct SavedModel {
    pub space: HvSpace,
    pub policy: TiePolicy,
    pub encoder: EncoderSpec,
    /// Training parameters (schedule constants, τ, key set, …) as free-form JSON.
    pub training: serde_json::Value,
    pub memory: AssociativeMemory,
}

#[derive(Serialize, Deserialize)]
struct Metadata {
    encoder: EncoderSpec,
    training: serde_json::Value,
}

fn kind_tag(kind: ModelKind) -> (u8, u32, u32) {
    match kind {
        ModelKind::IntegerCentroid => (0, 0, 0),
        ModelKind::Binary => (1, 0, 0),
        ModelKind::Bipolar => (2, 0, 0),
        ModelKind::Ternary => (3, 0, 0),
        ModelKind::Compressed { segments, segment_dim } => (4, segments as u32, segment_dim as u32),
    }
}

fn metric_tag(m: Metric) -> u8 {
    match m {
        Metric::Hamming => 0,
        Metric::Cosine => 1,
        Metric::Dot => 2,
    }
}

fn to_u32(v: usize, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| HarnessError::Format(format!("{what} {v} does not fit in 32 bits")))
}

pub fn encode_model(model: &SavedModel) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(model.space.dim() as u64).to_le_bytes());
    out.extend_from_slice(&model.space.seed().to_le_bytes());
    let (policy, tie_seed) = match model.policy {
        TiePolicy::FavorZero => (0u8, 0u64),
        TiePolicy::FavorOne => (1, 0),
        TiePolicy::RandomExtraVector { seed } => (2, seed),
    };
    out.push(policy);
    out.extend_from_slice(&tie_seed.to_le_bytes());
    let am = &model.memory;
    let (kind, segments, segment_dim) = kind_tag(am.kind());
    out.push(kind);
    out.push(metric_tag(am.metric()));
    out.extend_from_slice(&segments.to_le_bytes());
    out.extend_from_slice(&segment_dim.to_le_bytes());
    let meta = serde_json::to_vec(&Metadata {
        encoder: model.encoder.clone(),
        training: model.training.clone(),
    })
    .map_err(|e| HarnessError::Format(e.to_string()))?;
    out.extend_from_slice(&to_u32(meta.len(), "metadata length")?.to_le_bytes());
    out.extend_from_slice(&meta);
    out.extend_from_slice(&to_u32(am.class_count(), "class count")?.to_le_bytes());
    for c in am.classes() {
        let label = c.label.as_bytes();
        let len = u16::try_from(label.len()).map_err(|_| HarnessError::Format(format!("label `{}` is too long", c.label)))?;
        out.extend_from_slice(&len.to_le_bytes());
        out.extend_from_slice(label);
        out.push(u8::from(c.accumulator.is_some()));
        match &c.vector {
            ClassVector::Binary(hv) => hv.words().iter().for_each(|w| out.extend_from_slice(&w.to_le_bytes())),
            ClassVector::Bipolar(hv) => out.extend(hv.values().iter().map(|&v| v as u8)),
            ClassVector::Ternary(hv) => out.extend(hv.values().iter().map(|&v| v as u8)),
            ClassVector::Integer(v) | ClassVector::Compressed(v) => {
                v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes()))
            }
        }
        if let Some(acc) = &c.accumulator {
            acc.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes()));
        }
    }
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or_else(|| {
            HarnessError::Format(format!("truncated at byte {} while reading {what}", self.bytes.len()))
        })?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn array<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        Ok(self.take(N, what)?.try_into().expect("exact length"))
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.array::<1>(what)?[0])
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.array(what)?))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.array(what)?))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array(what)?))
    }

    fn i32s(&mut self, n: usize, what: &str) -> Result<Vec<i32>> {
        let bytes = self.take(n.checked_mul(4).ok_or_else(|| HarnessError::Format(format!("{what} too long")))?, what)?;
        Ok(bytes.chunks_exact(4).map(|c| i32::from_le_bytes(c.try_into().expect("4 bytes"))).collect())
    }

    fn i8s(&mut self, n: usize, what: &str) -> Result<Vec<i8>> {
        Ok(self.take(n, what)?.iter().map(|&b| b as i8).collect())
    }
}

pub fn decode_model(bytes: &[u8]) -> Result<SavedModel> {
    let mut r = Reader { bytes, pos: 0 };
    if &r.array::<4>("magic")? != MAGIC {
        return Err(HarnessError::Format("not a model file (bad magic)".into()));
    }
    let version = r.u16("version")?;
    if version != FORMAT_VERSION {
        return Err(HarnessError::Format(format!(
            "unsupported format version {version}, expected {FORMAT_VERSION}"
        )));
    }
    let dim = usize::try_from(r.u64("dimension")?).map_err(|_| HarnessError::Format("dimension too large".into()))?;
    let space = HvSpace::new(dim, r.u64("seed")?)?;
    let policy_tag = r.u8("tie policy")?;
    let tie_seed = r.u64("tie seed")?;
    let policy = match policy_tag {
        0 => TiePolicy::FavorZero,
        1 => TiePolicy::FavorOne,
        2 => TiePolicy::RandomExtraVector { seed: tie_seed },
        t => return Err(HarnessError::Format(format!("unknown tie policy tag {t}"))),
    };
    let kind_tag = r.u8("model kind")?;
    let metric = r.u8("metric")?;
    let segments = r.u32("segment count")? as usize;
    let segment_dim = r.u32("segment length")? as usize;
    let kind = match kind_tag {
        0 => ModelKind::IntegerCentroid,
        1 => ModelKind::Binary,
        2 => ModelKind::Bipolar,
        3 => ModelKind::Ternary,
        4 => ModelKind::Compressed { segments, segment_dim },
        t => return Err(HarnessError::Format(format!("unknown model kind tag {t}"))),
    };
    if metric != metric_tag(kind.metric()) {
        return Err(HarnessError::Format(format!("metric tag {metric} does not match a {kind} model")));
    }
    let meta_len = r.u32("metadata length")? as usize;
    let meta: Metadata = serde_json::from_slice(r.take(meta_len, "metadata")?)
        .map_err(|e| HarnessError::Format(format!("metadata: {e}")))?;
    let k = r.u32("class count")? as usize;
    let mut classes = Vec::with_capacity(k.min(1 << 16));
    for i in 0..k {
        let what = format!("class {i}");
        let len = r.u16(&what)? as usize;
        let label = std::str::from_utf8(r.take(len, &what)?)
            .map_err(|_| HarnessError::Format(format!("{what}: label is not UTF-8")))?
            .to_owned();
        let has_acc = match r.u8(&what)? {
            0 => false,
            1 => true,
            f => return Err(HarnessError::Format(format!("{what}: bad accumulator flag {f}"))),
        };
        let vector = match kind {
            ModelKind::Binary => {
                let words = (0..dim.div_ceil(64)).map(|_| r.u64(&what)).collect::<Result<Vec<_>>>()?;
                ClassVector::Binary(BinaryHv::from_words(dim, words)?)
            }
            ModelKind::Bipolar => ClassVector::Bipolar(BipolarHv::from_values(r.i8s(dim, &what)?)?),
            ModelKind::Ternary => ClassVector::Ternary(TernaryHv::from_values(r.i8s(dim, &what)?)?),
            ModelKind::IntegerCentroid => ClassVector::Integer(r.i32s(dim, &what)?),
            ModelKind::Compressed { segment_dim, .. } => ClassVector::Compressed(r.i32s(segment_dim, &what)?),
        };
        let accumulator = if has_acc { Some(r.i32s(dim, &what)?) } else { None };
        classes.push(ClassEntry {
            label,
            vector,
            accumulator,
        });
    }
    if r.pos != bytes.len() {
        return Err(HarnessError::Format(format!("{} trailing bytes", bytes.len() - r.pos)));
    }
    Ok(SavedModel {
        space,
        policy,
        encoder: meta.encoder,
        training: meta.training,
        memory: AssociativeMemory::new(kind, dim, classes)?,
    })
}

/// Writes through a sibling temporary file so a failed save never leaves a partial model.
pub fn save_model(path: &Path, model: &SavedModel) -> Result<()> {
    let bytes = encode_model(model)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, &bytes).map_err(|e| HarnessError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| HarnessError::io(path, e))
}

pub fn load_model(path: &Path) -> Result<SavedModel> {
    let bytes = fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    decode_model(&bytes)
}
