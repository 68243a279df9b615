use thiserror::Error;

/// Failures raised by scalar arithmetic and by the operations built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("backend mismatch: {0} vs {1}")]
    BackendMismatch(&'static str, &'static str),
    #[error("p-adic precision exhausted ({0})")]
    PrecisionExhausted(String),
    #[error("invalid prime {0}: must be an odd prime")]
    InvalidPrime(String),
    #[error("invalid precision {0}: must be at least 1")]
    InvalidPrecision(i64),
    #[error("invalid q: {0}")]
    InvalidQ(String),
    #[error("pole at q = {0}")]
    Pole(String),
    #[error("unsupported exponent: {0}")]
    UnsupportedExponent(String),
    #[error("vanishing denominator: {0}")]
    VanishingDenominator(String),
    #[error("divergent parameters: {0}")]
    Divergent(String),
    #[error("budget exceeded: {points} grid points > budget {budget}")]
    BudgetExceeded { points: u128, budget: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("sequence too short: need {needed} values, have {have}")]
    SequenceTooShort { needed: usize, have: usize },
}

pub type Result<T, E = NumericError> = std::result::Result<T, E>;

/// Failures from the textual scalar formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error: {msg} in {input:?}")]
pub struct ParseError {
    pub input: String,
    pub msg: String,
}

impl ParseError {
    pub(crate) fn new(input: &str, msg: impl Into<String>) -> Self {
        // keep error payloads bounded on hostile input
        let input: String = input.chars().take(64).collect();
        Self {
            input,
            msg: msg.into(),
        }
    }
}
