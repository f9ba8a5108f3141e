use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("motif must contain at least one point")]
    EmptyMotif,
    #[error("period must be positive, got {0}")]
    NonPositivePeriod(Rational),
    #[error("points {first} and {second} coincide modulo the period")]
    DuplicatePoint { first: Rational, second: Rational },
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("corners at x = {x} disagree: y = {first} vs y = {second}")]
    InconsistentCorner {
        x: Rational,
        first: Rational,
        second: Rational,
    },
    #[error("corner ({x}, {y}) has a negative coordinate")]
    NegativeCorner { x: Rational, y: Rational },
    #[error("function is nonzero beyond the reflection point {center}")]
    SupportExceedsReflection { center: Rational },
    #[error("shift amount must be non-negative, got {0}")]
    NegativeShift(Rational),
    #[error("trapezoid triple ({d_left}, {s}, {d_right}) needs positive outer entries and s >= 0")]
    InvalidTriple {
        d_left: Rational,
        s: Rational,
        d_right: Rational,
    },

    #[error("k = {k} is outside 1..={m}")]
    KOutOfRange { k: usize, m: usize },
    #[error("radius must be non-negative, got {0}")]
    NegativeRadius(Rational),

    #[error("gaps are not pairwise distinct: {0}")]
    NotGeneric(String),
    #[error("function is not the first density of any generic sequence: {0}")]
    InconsistentFunction(String),

    #[error("malformed document: {0}")]
    Format(String),
}
