use thiserror::Error;

use crate::scalar::ScalarMode;

/// Errors produced by the library. Non-invertibility is not an error; see
/// [`crate::distr::Inverse`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("scalar mode mismatch: {left:?} vs {right:?}")]
    ModeMismatch { left: ScalarMode, right: ScalarMode },

    #[error("derivative of order {order} not supported by {family} (cap {cap})")]
    DerivativeOrder {
        family: &'static str,
        order: u32,
        cap: u32,
    },

    #[error("test-function battery is empty")]
    EmptyBattery,

    #[error("term at {location} with order {order} is not on the 1/{denominator} comb grid")]
    OffGrid {
        location: String,
        order: u32,
        denominator: u64,
    },

    #[error("comb index {index} exceeds the declared support bound {bound}")]
    SupportExceeded { index: i64, bound: i64 },

    #[error("support [{lo}, {hi}] is not strictly inside (-{k}, {k})")]
    SupportNotInside { lo: String, hi: String, k: i64 },

    #[error("root finder did not converge after {iterations} iterations (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("perturbation budget exhausted; offending root cluster {cluster:?}")]
    BudgetExhausted { cluster: Vec<(f64, f64)> },

    #[error("polynomials are not numerically coprime (Bezout residual {residual:e})")]
    NotCoprime { residual: f64 },

    #[error("zero distribution has no growth certificate")]
    ZeroDistribution,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
