use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A reduced rational location `num/den` with `den >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint(Rational64);

impl RationalPoint {
    pub const ZERO: RationalPoint = RationalPoint(Rational64::new_raw(0, 1));

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("location denominator is zero".into()));
        }
        Ok(Self(Rational64::new(num, den)))
    }

    pub fn integer(n: i64) -> Self {
        Self(Rational64::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        if self.0 < Rational64::zero() {
            -*self
        } else {
            *self
        }
    }

    /// Index `k` with `self == k/n`, if the point lies on the `1/n` grid.
    pub fn grid_index(&self, n: u64) -> Option<i64> {
        let n = i64::try_from(n).ok()?;
        let scaled = self.0 * Rational64::from_integer(n);
        scaled.is_integer().then(|| scaled.to_integer())
    }

    /// Least common multiple of the denominators.
    pub fn common_denominator<'a>(points: impl IntoIterator<Item = &'a RationalPoint>) -> u64 {
        points
            .into_iter()
            .fold(1_i64, |acc, p| acc.lcm(&p.denom()))
            .unsigned_abs()
    }
}

impl From<Rational64> for RationalPoint {
    fn from(r: Rational64) -> Self {
        Self(r)
    }
}

impl From<i64> for RationalPoint {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl Add for RationalPoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for RationalPoint {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Neg for RationalPoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for RationalPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Rational64::from_str(s.trim())
            .map(Self)
            .map_err(|e| Error::Parse(format!("bad location {s:?}: {e}")))
    }
}
