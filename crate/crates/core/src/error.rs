use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole: argument {re}{im:+}i is within 1e-9 of a non-positive integer")]
    PoleProximity { re: f64, im: f64 },

    #[error("kernel quadrature did not converge (order {order}, argument {arg}, rel. error {rel_err:e})")]
    QuadratureNonConvergence { order: String, arg: String, rel_err: f64 },

    #[error("series did not converge within {terms} terms")]
    SeriesNonConvergence { terms: usize },

    #[error("non-convergence at {level}: estimate {estimate:e}, error {err_abs:e}")]
    NonConvergence { level: String, estimate: f64, err_abs: f64 },

    #[error("non-finite integrand value at {at}")]
    SingularIntegrand { at: String },

    #[error("envelope violation: |F| = {value:e} exceeds 10x the declared envelope {bound:e} at t = {t}")]
    EnvelopeViolation { t: f64, value: f64, bound: f64 },

    #[error("Re s = {re} outside the convergence strip ({lo}, {hi})")]
    StripViolation { re: f64, lo: f64, hi: f64 },

    #[error("norm diverges: {0}")]
    DivergentNorm(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("pole on contour: {0}")]
    PoleOnContour(String),

    #[error("identity residual {residual:e} exceeds {limit:e}")]
    IdentityResidualExceeded { residual: f64, limit: f64 },

    #[error("envelope too weak: {0}")]
    EnvelopeTooWeak(String),

    #[error("kernel zero on contour: {0}")]
    KernelZeroOnContour(String),

    #[error("closed form disagrees with quadrature: closed {closed:e}, quadrature {quad:e}")]
    ClosedFormMismatch { closed: f64, quad: f64 },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors caused by inadmissible input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::PoleProximity { .. }
                | Error::StripViolation { .. }
                | Error::DivergentNorm(_)
                | Error::DomainViolation(_)
                | Error::PoleOnContour(_)
                | Error::EnvelopeTooWeak(_)
                | Error::KernelZeroOnContour(_)
                | Error::InvalidInput(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
