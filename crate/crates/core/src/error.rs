use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is below the minimum of {min}", min = crate::hv::MIN_DIM)]
    DimensionTooSmall(usize),

    #[error("cannot bundle an empty list of hypervectors")]
    EmptyBundle,

    #[error("cannot threshold an accumulator that holds no operands")]
    EmptyAccumulator,

    #[error("accumulator operand count overflowed")]
    AccumulatorOverflow,

    #[error("cosine similarity is undefined for a zero-magnitude vector")]
    ZeroMagnitude,

    #[error("{kind} component {index} has out-of-domain value {value}")]
    InvalidComponent {
        kind: &'static str,
        index: usize,
        value: i64,
    },

    #[error("malformed hypervector text: {0}")]
    Parse(String),

    #[error("a level memory needs at least 2 levels, got {0}")]
    TooFewLevels(usize),

    #[error("invalid value range [{min}, {max}]")]
    InvalidRange { min: f64, max: f64 },

    #[error("{flips} flips per level over {steps} steps exceed dimension {dim}")]
    TooManyFlips {
        flips: usize,
        steps: usize,
        dim: usize,
    },

    #[error("Hadamard order {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("cannot take {count} keys from a Hadamard matrix of order {order}")]
    TooManyKeys { count: usize, order: usize },

    #[error("feature {index} is not finite")]
    NonFiniteFeature { index: usize },

    #[error("empty {0}")]
    EmptyInput(&'static str),

    #[error("input too short: need at least {needed}, found {found}")]
    InputTooShort { needed: usize, found: usize },

    #[error("pixel {index} has non-binary value {value}")]
    NonBinaryPixel { index: usize, value: u8 },

    #[error("LBP code {code} at channel {channel}, step {step} exceeds 63")]
    InvalidLbpCode {
        channel: usize,
        step: usize,
        code: u8,
    },

    #[error("channel {channel} has {found} entries, expected {expected}")]
    ChannelMismatch {
        channel: usize,
        expected: usize,
        found: usize,
    },

    #[error("class {0:?} has no training examples")]
    EmptyClass(String),

    #[error("label {0:?} is not a class of this model")]
    UnknownLabel(String),

    #[error("model/query kind mismatch: {0}")]
    KindMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
