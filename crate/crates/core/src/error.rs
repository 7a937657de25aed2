use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("exponents must differ (p = q = {0}); the two-constraint problem requires p != q")]
    EqualExponents(f64),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    #[error("quadrature did not converge on [{a}, {b}]: value {value:e}, error estimate {error:e} after {intervals} intervals")]
    Quadrature {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
        intervals: usize,
    },

    #[error("root bracket failure: {0}")]
    Bracket(String),

    #[error("{what} did not converge after {iterations} iterations: {detail}")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        detail: String,
    },
}

impl Error {
    /// Whether the error stems from the caller's input rather than from a
    /// numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidParams(_) | Error::EqualExponents(_) | Error::Domain(_))
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
