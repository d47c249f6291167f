use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A precondition on the parameters was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// The quantity is infinite (an integral or norm diverges).
    #[error("divergent: {0}")]
    Divergent(String),

    /// Adaptive quadrature ran out of subdivisions before meeting the tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e}")]
    NoConvergence { estimate: f64, error: f64 },

    /// The integrand produced a NaN or an infinity inside the domain.
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),

    /// Evaluation was requested at a pole of the function.
    #[error("function is singular at x = {0}")]
    SingularPoint(f64),

    /// Not enough data to fit a statistic.
    #[error("insufficient data: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// A function-spec, grid or file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
