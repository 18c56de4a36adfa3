use core::fmt;

pub type CoreResult<T> = Result<T, CoreError>;

#[derive(Clone, Debug, PartialEq)]
pub enum CoreError {
    /// An operation that needs at least one record got none.
    EmptyInput,
    UnknownClass,
    UnlabeledRecord {
        index: usize,
    },
    ArityMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    InvalidValue {
        index: usize,
        attribute: usize,
    },
    DuplicateAttribute {
        index: usize,
    },
    InvalidFraction,
    TooFewClasses {
        found: usize,
    },
    InvalidParameter(&'static str),
    SchemaMismatch {
        expected: u64,
        found: u64,
    },
    /// A record is shorter than the highest attribute index a model reads.
    RecordTooShort {
        needed: usize,
        found: usize,
    },
    NonIncreasingTimestamp {
        prev: u64,
        curr: u64,
    },
    CounterOutOfRange {
        attribute: usize,
    },
    EmptyMatrix,
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::EmptyInput => f.write_str("empty input"),
            CoreError::UnknownClass => f.write_str("unknown traffic class"),
            CoreError::UnlabeledRecord { index } => write!(f, "record {index} has no class label"),
            CoreError::ArityMismatch { index, expected, found } => {
                write!(f, "record {index} has {found} values, schema has {expected}")
            }
            CoreError::InvalidValue { index, attribute } => {
                write!(f, "record {index}, attribute {attribute}: value must be finite and >= 0")
            }
            CoreError::DuplicateAttribute { index } => {
                write!(f, "attribute {index} duplicates an earlier name")
            }
            CoreError::InvalidFraction => f.write_str("train fraction must lie in (0, 1)"),
            CoreError::TooFewClasses { found } => {
                write!(f, "need at least 2 classes, training data has {found}")
            }
            CoreError::InvalidParameter(p) => write!(f, "invalid parameter: {p}"),
            CoreError::SchemaMismatch { expected, found } => {
                write!(f, "schema fingerprint {found:016x} does not match model schema {expected:016x}")
            }
            CoreError::RecordTooShort { needed, found } => {
                write!(f, "record has {found} values, model reads {needed}")
            }
            CoreError::NonIncreasingTimestamp { prev, curr } => {
                write!(f, "snapshot timestamp {curr} does not advance past {prev}")
            }
            CoreError::CounterOutOfRange { attribute } => {
                write!(f, "counter {attribute} is not below the wrap modulus")
            }
            CoreError::EmptyMatrix => f.write_str("confusion matrix is empty"),
        }
    }
}

impl core::error::Error for CoreError {}
