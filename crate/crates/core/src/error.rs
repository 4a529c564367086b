use thiserror::Error;

/// Errors raised by the verification toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain where the quantity is defined.
    #[error("parameter domain error: {0}")]
    ParameterDomain(String),

    /// A caller-side precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The integrand is not integrable against the measure, or the adaptive
    /// refinement diverged.
    #[error("integrability error: {0}")]
    Integrability(String),

    /// A quadratic has no real root where one was requested.
    #[error("negative discriminant {0}")]
    NegativeDiscriminant(f64),

    /// A constructive search ran out of candidates.
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::ParameterDomain(msg.into())
}
