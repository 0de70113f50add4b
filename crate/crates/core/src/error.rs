use num_rational::BigRational;
use thiserror::Error;

use crate::jp::DigitSequence;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unimodular (determinant {determinant})")]
    NotUnimodular { determinant: String },

    #[error("matrix is not square or has inconsistent rows")]
    MalformedMatrix,

    /// Interval enclosure still straddles an integer at the precision cap.
    /// `partial` holds the digits certified before the failure, if any.
    #[error("precision exhausted after {certified} certified digit block(s)")]
    PrecisionExhausted {
        certified: usize,
        partial: Option<Box<DigitSequence>>,
    },

    #[error("division by an interval that contains zero")]
    DivisionByZero,

    #[error("convergent has zero leading coordinate")]
    ZeroDenominator,

    #[error("reconstruction did not converge (best width {})", .best_width.as_ref().map(|w| w.to_string()).unwrap_or_else(|| "unbounded".into()))]
    NotConverging { best_width: Option<BigRational> },

    #[error("digit block {block} cannot arise from any vector (re-expansion disagrees)")]
    Inadmissible { block: usize },

    #[error("index {index} out of range (available {available})")]
    OutOfRange { index: usize, available: usize },

    #[error("need at least {needed} digit blocks, have {available}")]
    InsufficientDigits { needed: usize, available: usize },

    #[error("precision insufficient to decide proportionality")]
    Undecidable,

    #[error("terminated expansion does not define an infinite diagram")]
    TerminatedSequence,

    #[error("at least one level is required")]
    InsufficientLevels,

    #[error("leading lambda entry is zero")]
    ZeroLeadingEntry,

    #[error("algebras {first} and {second} are not tail equivalent within the horizon")]
    NotTailEquivalent { first: usize, second: usize },

    #[error("genus must be at least 1, got {0}")]
    InvalidGenus(i64),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
