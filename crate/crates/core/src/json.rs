//! JSON forms of distributions, Laurent polynomials and quadruples.
//!
//! Exact-mode coefficients are rational strings `"p/q"`; float-mode
//! coefficients are numbers. Parsing canonicalizes, so serializing a parsed
//! value reproduces a canonical document.

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::distr::{Distribution, PointTerm, RationalPoint};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::{GaussianRational, Scalar, ScalarMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocJson {
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub loc: LocJson,
    #[serde(default)]
    pub order: u32,
    pub re: Value,
    #[serde(default = "zero_value")]
    pub im: Value,
}

fn zero_value() -> Value {
    Value::from(0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionJson {
    pub mode: ScalarMode,
    pub terms: Vec<TermJson>,
}

fn check_mode(expected: ScalarMode, found: ScalarMode) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::ModeMismatch {
            left: expected,
            right: found,
        })
    }
}

impl DistributionJson {
    pub fn from_distribution<C: Scalar>(d: &Distribution<C>) -> Self {
        let terms = d
            .terms()
            .iter()
            .map(|t| {
                let (re, im) = t.coeff.to_json_parts();
                TermJson {
                    loc: LocJson {
                        num: t.location.numer(),
                        den: t.location.denom(),
                    },
                    order: t.order,
                    re,
                    im,
                }
            })
            .collect();
        Self { mode: C::MODE, terms }
    }

    pub fn to_distribution<C: Scalar>(&self) -> Result<Distribution<C>> {
        check_mode(C::MODE, self.mode)?;
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let loc = RationalPoint::new(t.loc.num, t.loc.den)
                    .map_err(|e| Error::Parse(format!("terms[{i}].loc: {e}")))?;
                let c = C::from_json_parts(&t.re, &t.im)
                    .map_err(|e| Error::Parse(format!("terms[{i}]: {e}")))?;
                Ok(PointTerm::new(c, loc, t.order))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Distribution::canonicalize(terms))
    }
}

/// A distribution whose scalar mode is only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyDistribution {
    Exact(Distribution<GaussianRational>),
    Float(Distribution<Complex64>),
}

impl AnyDistribution {
    pub fn from_json(j: &DistributionJson) -> Result<Self> {
        Ok(match j.mode {
            ScalarMode::Exact => Self::Exact(j.to_distribution()?),
            ScalarMode::Float => Self::Float(j.to_distribution()?),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_json(&parse_str(text)?)
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            Self::Exact(_) => ScalarMode::Exact,
            Self::Float(_) => ScalarMode::Float,
        }
    }

    pub fn to_json(&self) -> DistributionJson {
        match self {
            Self::Exact(d) => DistributionJson::from_distribution(d),
            Self::Float(d) => DistributionJson::from_distribution(d),
        }
    }

    pub fn to_float(&self) -> Distribution<Complex64> {
        match self {
            Self::Exact(d) => d.to_float(),
            Self::Float(d) => d.clone(),
        }
    }

    pub fn exact(&self) -> Result<&Distribution<GaussianRational>> {
        match self {
            Self::Exact(d) => Ok(d),
            Self::Float(_) => Err(Error::ModeMismatch {
                left: ScalarMode::Exact,
                right: ScalarMode::Float,
            }),
        }
    }

    pub fn float(&self) -> Result<&Distribution<Complex64>> {
        match self {
            Self::Float(d) => Ok(d),
            Self::Exact(_) => Err(Error::ModeMismatch {
                left: ScalarMode::Float,
                right: ScalarMode::Exact,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub exp: i64,
    pub re: Value,
    #[serde(default = "zero_value")]
    pub im: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentJson {
    pub mode: ScalarMode,
    pub coeffs: Vec<CoeffJson>,
}

impl LaurentJson {
    pub fn from_poly<C: Scalar>(p: &LaurentPoly<C>) -> Self {
        let coeffs = p
            .terms()
            .map(|(exp, c)| {
                let (re, im) = c.to_json_parts();
                CoeffJson { exp, re, im }
            })
            .collect();
        Self { mode: C::MODE, coeffs }
    }

    pub fn to_poly<C: Scalar>(&self) -> Result<LaurentPoly<C>> {
        check_mode(C::MODE, self.mode)?;
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                C::from_json_parts(&c.re, &c.im)
                    .map(|v| (c.exp, v))
                    .map_err(|e| Error::Parse(format!("coeffs[{i}]: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LaurentPoly::from_terms(terms))
    }
}

/// `(T, S, U, V)` with `T∗U + S∗V` expected to equal `δ_0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadrupleJson {
    #[serde(rename = "T")]
    pub t: DistributionJson,
    #[serde(rename = "S")]
    pub s: DistributionJson,
    #[serde(rename = "U")]
    pub u: DistributionJson,
    #[serde(rename = "V")]
    pub v: DistributionJson,
}

impl QuadrupleJson {
    pub fn from_parts<C: Scalar>(
        t: &Distribution<C>,
        s: &Distribution<C>,
        u: &Distribution<C>,
        v: &Distribution<C>,
    ) -> Self {
        Self {
            t: DistributionJson::from_distribution(t),
            s: DistributionJson::from_distribution(s),
            u: DistributionJson::from_distribution(u),
            v: DistributionJson::from_distribution(v),
        }
    }

    /// All four members, checked to share one mode.
    pub fn parts(&self) -> Result<[AnyDistribution; 4]> {
        let mode = self.t.mode;
        for other in [&self.s, &self.u, &self.v] {
            check_mode(mode, other.mode)?;
        }
        Ok([
            AnyDistribution::from_json(&self.t)?,
            AnyDistribution::from_json(&self.s)?,
            AnyDistribution::from_json(&self.u)?,
            AnyDistribution::from_json(&self.v)?,
        ])
    }
}

/// Parse JSON text; syntax errors carry line and column.
pub fn parse_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
