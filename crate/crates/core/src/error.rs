use thiserror::Error;

/// Errors shared by every module.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("singular point: {0}")]
    Singular(String),

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:.6e}, error {error:.3e})"
    )]
    QuadratureNonConvergence { estimate: f64, error: f64, subdivisions: usize },

    #[error("ODE step size underflow at t = {t:.6e} (h = {h:.3e})")]
    OdeStepUnderflow { t: f64, h: f64 },

    #[error("ODE step limit of {steps} reached at t = {t:.6e}")]
    OdeStepLimit { t: f64, steps: usize },

    #[error("metric near-singular at (eps = {eps:.6e}, mu = {mu:.6e}): condition number {cond:.3e}")]
    NearSingularMetric { eps: f64, mu: f64, cond: f64 },

    #[error("root bracket not found: {0}")]
    Bracket(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("protocol schema: {0}")]
    Schema(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by the caller's input rather than numerics.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::Schema(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
