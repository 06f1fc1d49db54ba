use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("abscissa must be strictly positive and finite, got {0}")]
    InvalidPoint(f64),

    #[error("derivative order {order} exceeds the configured maximum {max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("target tolerance {target:e} unattainable, achieved {achieved:e}")]
    ToleranceUnattainable { target: f64, achieved: f64 },

    #[error("invalid precision policy: {0}")]
    InvalidPolicy(String),

    #[error("quadrature did not converge: estimated error {estimate:e} exceeds {requested:e}")]
    QuadratureFailed { estimate: f64, requested: f64 },

    #[error("invalid quadrature configuration: {0}")]
    InvalidQuadrature(String),

    #[error("denominator underflow at x = {0}")]
    DenominatorUnderflow(f64),

    #[error("point ({x}, {y}) violates 0 < 2x < y")]
    DomainViolation { x: f64, y: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
