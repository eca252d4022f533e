//! Point distributions on the real line, the Laurent-polynomial bridge to
//! Dirac combs, unimodular Bézout approximation, mollified sampling and
//! Fourier–Laplace diagnostics.

pub mod bezout;
pub mod cli;
pub mod distr;
pub mod error;
pub mod json;
pub mod laurent;
pub mod mollify;
pub mod pipeline;
pub mod scalar;
pub mod transform;

pub use error::{Error, Result};
pub use scalar::{GaussianRational, Scalar, ScalarMode};
