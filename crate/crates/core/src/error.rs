use thiserror::Error;

use crate::poly::ParseError;

/// Errors raised by the library.
///
/// Variants fall into two families: input problems (parse errors) and
/// mathematical refusals, where an operation's precondition does not hold.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("denominator not invertible modulo {prime}")]
    NonInvertibleDenominator { prime: u64 },
    #[error("prime {0} does not fit in 63 bits")]
    PrimeTooLarge(u64),
    #[error("mixed-field arithmetic")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("divisor not reduced")]
    NotReduced,
    #[error("derivation {index} is not logarithmic along the divisor")]
    NotLogarithmic { index: usize },
    #[error("basis does not certify freeness: {0}")]
    NotFree(String),
    #[error("divisor is not linear free")]
    NotLinearFree,
    #[error("generators have mixed degrees")]
    MixedDegrees,
    #[error("rational map is identically zero")]
    ZeroMap,
    #[error("genericity failure at multidegree index {k} after {retries} retries: {detail}")]
    Genericity { k: usize, retries: usize, detail: String },
    #[error("saturation did not stabilize after {0} rounds")]
    SaturationBound(usize),
    #[error("class has non-integral coefficient {0}")]
    NonIntegral(String),
    #[error("non-transverse input: {0}")]
    NonTransverse(String),
    #[error("too many flats (more than {0})")]
    TooManyFlats(usize),
    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),
    #[error("curve lies inside the divisor")]
    CurveInDivisor,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    /// True for parse errors; everything else is a mathematical refusal.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
