use thiserror::Error;

/// Errors raised anywhere in the calculus engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error in `{node}` at x = {at}: {reason}")]
    Domain {
        node: String,
        at: f64,
        reason: String,
    },

    #[error("point {x} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("not a path: {reason} (witness x = {witness})")]
    NotAPath { witness: f64, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cannot glue: diagonal values at the junction {junction} differ by {gap}")]
    GlueMismatch { junction: f64, gap: f64 },

    #[error("cannot glue: domains [{left_lo}, {left_hi}] and [{right_lo}, {right_hi}] are not adjacent")]
    NotAdjacent {
        left_lo: f64,
        left_hi: f64,
        right_lo: f64,
        right_hi: f64,
    },

    #[error("quadrature budget of {subintervals} subintervals exceeded (partial estimate {estimate:?}, error estimate {error_estimate:e})")]
    QuadratureBudget {
        estimate: Vec<f64>,
        error_estimate: f64,
        subintervals: usize,
    },

    #[error("invalid argument: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
