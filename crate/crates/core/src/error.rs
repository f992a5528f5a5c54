use thiserror::Error;

/// Errors produced by the certification toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("invalid parameter for `{id}`: {reason}")]
    InvalidParameter { id: String, reason: String },

    #[error("invalid interval [{a}, {b}]: {reason}")]
    InvalidInterval { a: f64, b: f64, reason: &'static str },

    #[error("operation requires a non-degenerate interval, got a = b = {0}")]
    DegenerateInterval(f64),

    #[error("function is not finite at x = {x} (outside its domain or overflow)")]
    DomainViolation { x: f64 },

    #[error("invalid exponent {value}: {reason}")]
    InvalidExponent { value: f64, reason: &'static str },

    #[error("argument {0} outside [0, 1]")]
    OutOfRange(f64),

    #[error("invalid mean pair ({a}, {b}): {reason}")]
    InvalidMeanPair { a: f64, b: f64, reason: &'static str },

    #[error("missing argument `{0}`")]
    MissingArgument(&'static str),

    #[error("invalid quadrature request: {0}")]
    InvalidQuadrature(&'static str),

    #[error("integrand returned a non-finite value at {at:?}")]
    NonFiniteEvaluation { at: Vec<f64> },

    #[error("quadrature budget exhausted: estimate {estimate} with error {error_estimate}")]
    BudgetExhausted { estimate: f64, error_estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
