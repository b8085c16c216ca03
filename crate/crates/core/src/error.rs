use thiserror::Error;

use crate::expr::ParseError;
use crate::quad::QuadResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    /// Evaluation left the real domain of a node (log of a non-positive
    /// value, division by zero, fractional power of a non-positive base).
    #[error("domain error in `{node}` at t = {t}: {reason}")]
    Domain { node: String, t: f64, reason: &'static str },

    #[error("non-finite value {value} in {context}")]
    NonFinite { context: String, value: f64 },

    #[error("derivative order {requested} exceeds the supported maximum {max}")]
    OrderTooLarge { requested: usize, max: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid Hölder pair (p = {p}, q = {q}): {reason}")]
    InvalidHolder { p: f64, q: f64, reason: &'static str },

    /// The kernel exponent (nq - p)/(q - 1) is <= -1, so the kernel integral
    /// in the weighted Hölder split diverges.
    #[error("validity constraint n*q - p + q - 1 > 0 violated (n = {n}, p = {p}, q = {q})")]
    KernelDivergent { n: usize, p: f64, q: f64 },

    #[error("quadrature tolerance not reached: best value {} with error estimate {}", best.value, best.err_est)]
    ToleranceNotReached { best: QuadResult },

    #[error("no feasible parameter in the scan for {0}")]
    NoFeasibleParameter(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Whether the error stems from the caller's input rather than from the
    /// numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::InvalidInput(_)
                | Error::InvalidHolder { .. }
                | Error::OrderTooLarge { .. }
                | Error::KernelDivergent { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
