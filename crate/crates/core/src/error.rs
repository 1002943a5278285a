use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("odd Mathieu functions start at order 1 (got order {0})")]
    InvalidOrder(u32),

    #[error("Mathieu parameter q must be finite and non-negative (got {0})")]
    InvalidParameter(f64),

    #[error("radial argument {mu} overflows the Bessel-product series (sqrt(q)*e^mu = {arg:e})")]
    RadialOverflow { mu: f64, arg: f64 },

    #[error("truncation did not converge for order {order} at q = {q} (size {size})")]
    TruncationNotConverged { order: u32, q: f64, size: usize },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("only {found} root(s) below q = {q_max}, mode index {requested} requested")]
    RootNotFound {
        found: usize,
        requested: usize,
        q_max: f64,
    },

    #[error("root count did not stabilise under grid refinement (down to step {step})")]
    GridTooCoarse { step: f64 },

    #[error("{name} must be {expected} (got {value})")]
    OutOfRange {
        name: &'static str,
        expected: &'static str,
        value: f64,
    },

    #[error("empty point set")]
    EmptyPoints,

    #[error("at least two points are required for a branch fit (got {0})")]
    TooFewPoints(usize),

    #[error("all bias voltages are zero")]
    ZeroVoltages,

    #[error("junction search range [{min}, {max}] is empty or starts at zero")]
    InvalidJunctionRange { min: u32, max: u32 },
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            name,
            expected: "finite and > 0",
            value,
        })
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            name,
            expected: "finite and >= 0",
            value,
        })
    }
}
