use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    /// Normalized Hamming distance, `[0, 1]`; 0 is identical, 0.5 orthogonal.
    Hamming,
    /// Cosine similarity, `[-1, 1]`; 1 is identical, 0 orthogonal.
    Cosine,
    /// Raw inner product.
    Dot,
}

impl Metric {
    /// Whether a larger value means "more similar".
    pub fn higher_is_closer(self) -> bool {
        !matches!(self, Metric::Hamming)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Hamming => "hamming",
            Metric::Cosine => "cosine",
            Metric::Dot => "dot",
        })
    }
}

/// A similarity value tagged with the metric that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub metric: Metric,
    pub value: f64,
}

impl Similarity {
    pub fn new(metric: Metric, value: f64) -> Self {
        Self { metric, value }
    }

    /// True if `self` is strictly closer than `other` under the shared metric.
    pub fn is_closer_than(&self, other: &Similarity) -> bool {
        debug_assert_eq!(self.metric, other.metric);
        if self.metric.higher_is_closer() {
            self.value > other.value
        } else {
            self.value < other.value
        }
    }
}
