//! Loaders for the on-disk dataset formats.
//!
//! - Feature CSV: comma-separated, header row, one column named `label`,
//!   every other column a numeric feature.
//! - Text corpus: a directory of `<label>.txt` files, one sample per
//!   non-blank line.
//! - Font: blocks separated by blank lines, each a label line followed by
//!   rows of `0`/`1` characters. Lines starting with `#` are comments.
//! - Signal CSV: header row, one numeric column per channel and an optional
//!   `label` column naming the state of each sample.

use std::fs;
use std::io::Read;
use std::path::Path;

use hdc_core::encode::{FeatureVector, PixelGrid};

use crate::error::{HarnessError, Result};

pub const LABEL_COLUMN: &str = "label";

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureDataset {
    pub feature_names: Vec<String>,
    pub labels: Vec<String>,
    pub rows: Vec<FeatureVector>,
}

impl FeatureDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Smallest and largest value over all features.
    pub fn value_range(&self) -> (f64, f64) {
        self.rows
            .iter()
            .flat_map(|r| r.values().iter().copied())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| HarnessError::io(path, e))?;
    Ok(bytes)
}

fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read_file(path)?)
        .map_err(|e| HarnessError::malformed(&path.display().to_string(), 0, format!("not UTF-8: {e}")))
}

fn csv_error(source_name: &str, e: csv::Error) -> HarnessError {
    let line = e.position().map_or(0, |p| p.line());
    match e.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => HarnessError::malformed(
            source_name,
            line,
            format!("expected {expected_len} fields, found {len}"),
        ),
        _ => HarnessError::malformed(source_name, line, e.to_string()),
    }
}

fn parse_number(source_name: &str, line: u64, column: &str, field: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| HarnessError::malformed(source_name, line, format!("column `{column}`: `{field}` is not a number")))?;
    if !v.is_finite() {
        return Err(HarnessError::malformed(source_name, line, format!("column `{column}`: non-finite value")));
    }
    Ok(v)
}

pub fn parse_feature_csv<R: Read>(reader: R, label_column: &str, source_name: &str) -> Result<FeatureDataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_error(source_name, e))?.clone();
    if headers.is_empty() {
        return Err(HarnessError::EmptyDataset(source_name.to_owned()));
    }
    let label_at = headers
        .iter()
        .position(|h| h.trim() == label_column)
        .ok_or_else(|| HarnessError::malformed(source_name, 1, format!("no `{label_column}` column")))?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_at)
        .map(|(_, h)| h.trim().to_owned())
        .collect();
    if feature_names.is_empty() {
        return Err(HarnessError::malformed(source_name, 1, "no feature columns"));
    }
    let (mut labels, mut rows) = (Vec::new(), Vec::new());
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(source_name, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let label = record[label_at].trim();
        if label.is_empty() {
            return Err(HarnessError::malformed(source_name, line, "empty label"));
        }
        let values = record
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != label_at)
            .zip(&feature_names)
            .map(|((_, field), name)| parse_number(source_name, line, name, field))
            .collect::<Result<Vec<_>>>()?;
        labels.push(label.to_owned());
        rows.push(FeatureVector::new(values)?);
    }
    if rows.is_empty() {
        return Err(HarnessError::EmptyDataset(source_name.to_owned()));
    }
    Ok(FeatureDataset {
        feature_names,
        labels,
        rows,
    })
}

pub fn load_feature_csv(path: &Path, label_column: &str) -> Result<FeatureDataset> {
    let bytes = read_file(path)?;
    parse_feature_csv(bytes.as_slice(), label_column, &path.display().to_string())
}

/// Labeled text samples; labels come from file stems, files in name order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextCorpus {
    pub labels: Vec<String>,
    pub texts: Vec<String>,
}

impl TextCorpus {
    pub fn len(&self) -> usize {
        self.texts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.texts.is_empty()
    }
}

pub fn load_text_corpus(dir: &Path) -> Result<TextCorpus> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(|e| HarnessError::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| HarnessError::io(dir, e)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    let mut corpus = TextCorpus {
        labels: Vec::new(),
        texts: Vec::new(),
    };
    for path in files {
        let label = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| HarnessError::malformed(&path.display().to_string(), 0, "file name is not UTF-8"))?
            .to_owned();
        for line in read_text(&path)?.lines().filter(|l| !l.trim().is_empty()) {
            corpus.labels.push(label.clone());
            corpus.texts.push(line.to_owned());
        }
    }
    if corpus.is_empty() {
        return Err(HarnessError::EmptyDataset(dir.display().to_string()));
    }
    Ok(corpus)
}

/// Training and test corpora read from `<dir>/train` and `<dir>/test`.
pub fn load_language_corpus(dir: &Path) -> Result<(TextCorpus, TextCorpus)> {
    Ok((load_text_corpus(&dir.join("train"))?, load_text_corpus(&dir.join("test"))?))
}

pub fn parse_font(text: &str, source_name: &str) -> Result<Vec<(String, PixelGrid)>> {
    let mut glyphs = Vec::new();
    let mut block: Vec<(u64, &str)> = Vec::new();
    let mut shape: Option<(usize, usize)> = None;
    let mut finish = |block: &mut Vec<(u64, &str)>| -> Result<()> {
        let Some(&(label_line, label)) = block.first() else {
            return Ok(());
        };
        let rows = &block[1..];
        if rows.is_empty() {
            return Err(HarnessError::malformed(source_name, label_line, format!("glyph `{label}` has no rows")));
        }
        let width = rows[0].1.len();
        let mut pixels = Vec::with_capacity(width * rows.len());
        for &(line, row) in rows {
            if row.len() != width {
                return Err(HarnessError::malformed(source_name, line, format!("row has {} pixels, expected {width}", row.len())));
            }
            for c in row.chars() {
                pixels.push(match c {
                    '0' => 0,
                    '1' => 1,
                    other => {
                        return Err(HarnessError::malformed(source_name, line, format!("pixel `{other}` is not 0 or 1")))
                    }
                });
            }
        }
        let dims = (width, rows.len());
        match shape {
            None => shape = Some(dims),
            Some(s) if s != dims => {
                return Err(HarnessError::malformed(
                    source_name,
                    label_line,
                    format!("glyph `{label}` is {}x{}, others are {}x{}", dims.0, dims.1, s.0, s.1),
                ))
            }
            _ => {}
        }
        glyphs.push((label.to_owned(), PixelGrid::new(width, rows.len(), pixels)?));
        block.clear();
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            finish(&mut block)?;
        } else {
            block.push((i as u64 + 1, line));
        }
    }
    finish(&mut block)?;
    if glyphs.is_empty() {
        return Err(HarnessError::EmptyDataset(source_name.to_owned()));
    }
    Ok(glyphs)
}

pub fn load_font(path: &Path) -> Result<Vec<(String, PixelGrid)>> {
    parse_font(&read_text(path)?, &path.display().to_string())
}

/// The bundled uppercase 5×7 font.
pub fn builtin_font() -> Vec<(String, PixelGrid)> {
    parse_font(include_str!("../assets/font5x7.txt"), "font5x7.txt").expect("bundled font parses")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalRecording {
    pub channel_names: Vec<String>,
    /// `channels[c][t]`.
    pub channels: Vec<Vec<f64>>,
    /// Per-sample state labels when the file has a `label` column.
    pub labels: Option<Vec<String>>,
}

pub fn parse_signal_csv<R: Read>(reader: R, source_name: &str) -> Result<SignalRecording> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_error(source_name, e))?.clone();
    let label_at = headers.iter().position(|h| h.trim() == LABEL_COLUMN);
    let channel_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != label_at)
        .map(|(_, h)| h.trim().to_owned())
        .collect();
    if channel_names.is_empty() {
        return Err(HarnessError::malformed(source_name, 1, "no channel columns"));
    }
    let mut channels = vec![Vec::new(); channel_names.len()];
    let mut labels = label_at.map(|_| Vec::new());
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(source_name, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let mut c = 0;
        for (i, field) in record.iter().enumerate() {
            if Some(i) == label_at {
                labels.as_mut().expect("label column").push(field.trim().to_owned());
            } else {
                channels[c].push(parse_number(source_name, line, &channel_names[c], field)?);
                c += 1;
            }
        }
    }
    if channels[0].is_empty() {
        return Err(HarnessError::EmptyDataset(source_name.to_owned()));
    }
    Ok(SignalRecording {
        channel_names,
        channels,
        labels,
    })
}

pub fn load_signal_csv(path: &Path) -> Result<SignalRecording> {
    let bytes = read_file(path)?;
    parse_signal_csv(bytes.as_slice(), &path.display().to_string())
}
