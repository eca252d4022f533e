//! Coefficient fields.
//!
//! Every computation runs in one of two modes: exact Gaussian rationals
//! (`re + i·im` with arbitrary-precision rational parts) or double-precision
//! complex floats. The mode is a type parameter, so mixing modes inside a
//! typed computation does not compile; the dynamic layer in
//! [`crate::json`] rejects it at runtime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Absolute comparison tolerance on float-mode coefficients.
pub const FLOAT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Float,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for ScalarMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ScalarMode::Exact),
            "float" => Ok(ScalarMode::Float),
            other => Err(Error::Parse(format!("unknown scalar mode {other:?}"))),
        }
    }
}

/// A coefficient field: either [`GaussianRational`] or [`Complex64`].
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const MODE: ScalarMode;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn to_c64(&self) -> Complex64;

    /// Exact mode converts the binary value of each part without rounding.
    fn from_c64(z: Complex64) -> Self;

    fn from_i64(n: i64) -> Self;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    /// `(hi, lo)` with `hi + lo` the value to about twice `f64` precision.
    fn to_c64_split(&self) -> (Complex64, Complex64) {
        (self.to_c64(), Complex64::new(0.0, 0.0))
    }

    /// Coefficient equality: structural in exact mode, within [`FLOAT_TOL`] in float mode.
    fn coeff_eq(&self, other: &Self) -> bool;

    fn to_json_parts(&self) -> (Value, Value);

    fn from_json_parts(re: &Value, im: &Value) -> Result<Self>;
}

/// `re + i·im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    /// `num/den` as a real value. Panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn i() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "({})i", self.im)
        } else if self.im.is_negative() {
            write!(f, "({} - ({})i)", self.re, -self.im.clone())
        } else {
            write!(f, "({} + ({})i)", self.re, self.im)
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::real(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => BigRational::from_str(s.trim())
            .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(BigInt::from(i)))
            .ok_or_else(|| Error::Parse(format!("exact mode needs integer or \"p/q\", got {n}"))),
        other => Err(Error::Parse(format!("expected rational, got {other}"))),
    }
}

fn parse_float(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("bad number {n}"))),
        Value::String(s) => {
            if let Ok(x) = s.trim().parse::<f64>() {
                Ok(x)
            } else {
                BigRational::from_str(s.trim())
                    .map(|r| rational_to_f64(&r))
                    .map_err(|_| Error::Parse(format!("bad float {s:?}")))
            }
        }
        other => Err(Error::Parse(format!("expected number, got {other}"))),
    }
}

impl Scalar for GaussianRational {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn from_c64(z: Complex64) -> Self {
        Self::new(f64_to_rational(z.re), f64_to_rational(z.im))
    }

    fn to_c64_split(&self) -> (Complex64, Complex64) {
        let hi = self.to_c64();
        if !(hi.re.is_finite() && hi.im.is_finite()) {
            return (hi, Complex64::new(0.0, 0.0));
        }
        (hi, (self.clone() - Self::from_c64(hi)).to_c64())
    }

    fn from_i64(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    fn coeff_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn to_json_parts(&self) -> (Value, Value) {
        (
            Value::String(self.re.to_string()),
            Value::String(self.im.to_string()),
        )
    }

    fn from_json_parts(re: &Value, im: &Value) -> Result<Self> {
        Ok(Self::new(parse_rational(re)?, parse_rational(im)?))
    }
}

impl Scalar for Complex64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn from_c64(z: Complex64) -> Self {
        z
    }

    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn coeff_eq(&self, other: &Self) -> bool {
        (self - other).norm() <= FLOAT_TOL
    }

    fn to_json_parts(&self) -> (Value, Value) {
        (json_f64(self.re), json_f64(self.im))
    }

    fn from_json_parts(re: &Value, im: &Value) -> Result<Self> {
        Ok(Complex64::new(parse_float(re)?, parse_float(im)?))
    }
}

fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(x.to_string()))
}
