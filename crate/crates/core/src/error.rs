use thiserror::Error;

/// Errors surfaced by model construction, MGF evaluation and the moment
/// routines built on top of them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor received parameters outside their admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An argument fell outside the domain where the operation is defined
    /// (outside the strip of regularity, a pole, an infeasible moment order).
    #[error("domain error: {0}")]
    Domain(String),

    /// Quadrature did not reach the requested tolerance.
    #[error("convergence error: {message} (partial value {partial}, error estimate {err_estimate})")]
    Convergence {
        message: String,
        partial: f64,
        err_estimate: f64,
    },

    /// The integrand produced a non-finite value.
    #[error("integrand error: non-finite value at t = {t}")]
    Integrand { t: f64 },

    /// No usable contour abscissa: the validity region around zero is empty.
    #[error("degenerate strip: {0}")]
    DegenerateStrip(String),

    /// Root bracketing or refinement failed.
    #[error("root error: {0}")]
    Root(String),

    /// A numerically degenerate result (for example a non-positive variance).
    #[error("computation error: {0}")]
    Computation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// Short machine-readable tag for the error category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Domain(_) => "domain",
            Error::Convergence { .. } => "convergence",
            Error::Integrand { .. } => "integrand",
            Error::DegenerateStrip(_) => "degenerate-strip",
            Error::Root(_) => "root",
            Error::Computation(_) => "computation",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
