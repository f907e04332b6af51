use thiserror::Error;

use crate::rounding::IterationTrace;

/// Errors raised by the geometry, duality, rounding and certificate layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unbounded model in direction {0:?}")]
    Unbounded(Vec<f64>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point is not on the boundary (gauge = {gauge})")]
    NotOnBoundary { gauge: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error(
        "Hausdorff budget not met: d_H(inner, outer) = {achieved} >= {epsilon} \
         after {halvings} halvings of the regularization weight"
    )]
    Budget {
        epsilon: f64,
        achieved: f64,
        halvings: usize,
    },

    #[error("averaging iteration lost monotonicity at step {step}")]
    NonMonotone { step: usize, trace: IterationTrace },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn check_finite(what: &str, xs: &[f64]) -> Result<()> {
    if xs.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} has non-finite entries")))
    }
}
