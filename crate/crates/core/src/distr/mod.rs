//! Finite point-supported distributions `Σ c·δ_a^(r)` and their convolution algebra.
//!
//! A [`Distribution`] is kept in canonical form: terms sorted by
//! `(location, order)`, duplicate keys merged, zero coefficients dropped. The
//! zero distribution is the empty term list and `δ_0` is the unit for
//! convolution.

mod comb;
mod point;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub use comb::DiracComb;
pub use point::RationalPoint;

use crate::error::{Error, Result};
use crate::mollify::TestFunction;
use crate::scalar::Scalar;

/// `coeff · δ_location^(order)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointTerm<C> {
    pub location: RationalPoint,
    pub order: u32,
    pub coeff: C,
}

impl<C> PointTerm<C> {
    pub fn new(coeff: C, location: RationalPoint, order: u32) -> Self {
        Self {
            location,
            order,
            coeff,
        }
    }
}

/// Closed convex hull of the support.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportHull {
    Empty,
    Interval { lo: RationalPoint, hi: RationalPoint },
}

impl SupportHull {
    pub fn bounds(&self) -> Option<(RationalPoint, RationalPoint)> {
        match *self {
            SupportHull::Empty => None,
            SupportHull::Interval { lo, hi } => Some((lo, hi)),
        }
    }
}

/// Result of [`Distribution::invert`].
#[derive(Clone, Debug, PartialEq)]
pub enum Inverse<C> {
    Invertible(Distribution<C>),
    NotInvertible,
}

impl<C> Inverse<C> {
    pub fn into_option(self) -> Option<Distribution<C>> {
        match self {
            Inverse::Invertible(d) => Some(d),
            Inverse::NotInvertible => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<C> {
    terms: Vec<PointTerm<C>>,
}

impl<C: Scalar> Default for Distribution<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> Distribution<C> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// `δ_0`, the convolution unit.
    pub fn identity() -> Self {
        Self::delta(RationalPoint::ZERO)
    }

    pub fn delta(location: RationalPoint) -> Self {
        Self::term(C::one(), location, 0)
    }

    pub fn term(coeff: C, location: RationalPoint, order: u32) -> Self {
        Self::canonicalize(vec![PointTerm::new(coeff, location, order)])
    }

    /// Sort, merge equal `(location, order)` keys and drop zero coefficients.
    pub fn canonicalize(terms: impl IntoIterator<Item = PointTerm<C>>) -> Self {
        let mut acc: BTreeMap<(RationalPoint, u32), C> = BTreeMap::new();
        for t in terms {
            accumulate(&mut acc, (t.location, t.order), t.coeff);
        }
        Self::from_map(acc)
    }

    fn from_map(map: BTreeMap<(RationalPoint, u32), C>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((location, order), coeff)| PointTerm {
                location,
                order,
                coeff,
            })
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[PointTerm<C>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<PointTerm<C>> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_order(&self) -> u32 {
        self.terms.iter().map(|t| t.order).max().unwrap_or(0)
    }

    /// Coefficient of `δ_a^(r)`, zero when absent.
    pub fn coeff(&self, location: RationalPoint, order: u32) -> C {
        self.terms
            .binary_search_by(|t| (t.location, t.order).cmp(&(location, order)))
            .map(|i| self.terms[i].coeff.clone())
            .unwrap_or_else(|_| C::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::canonicalize(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| PointTerm::new(-t.coeff.clone(), t.location, t.order))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::canonicalize(
            self.terms
                .iter()
                .map(|t| PointTerm::new(c.clone() * t.coeff.clone(), t.location, t.order)),
        )
    }

    /// Bilinear extension of `δ_a^(r) ∗ δ_b^(s) = δ_{a+b}^(r+s)`.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut acc = BTreeMap::new();
        for x in &self.terms {
            for y in &other.terms {
                accumulate(
                    &mut acc,
                    (x.location + y.location, x.order + y.order),
                    x.coeff.clone() * y.coeff.clone(),
                );
            }
        }
        Self::from_map(acc)
    }

    /// `δ_a ∗ self`.
    pub fn translate(&self, by: RationalPoint) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| PointTerm::new(t.coeff.clone(), t.location + by, t.order))
                .collect(),
        }
    }

    pub fn support_hull(&self) -> SupportHull {
        match (self.terms.first(), self.terms.last()) {
            (Some(first), Some(last)) => SupportHull::Interval {
                lo: first.location,
                hi: last.location,
            },
            _ => SupportHull::Empty,
        }
    }

    /// Invertible elements are exactly the nonzero multiples of a single
    /// order-0 point mass; `(c·δ_a)^{-1} = c^{-1}·δ_{-a}`.
    pub fn invert(&self) -> Inverse<C> {
        match self.terms.as_slice() {
            [t] if t.order == 0 => match t.coeff.inv() {
                Some(ci) => Inverse::Invertible(Self::term(ci, -t.location, 0)),
                None => Inverse::NotInvertible,
            },
            _ => Inverse::NotInvertible,
        }
    }

    /// `⟨Σ c_j δ_{a_j}^{(r_j)}, ψ⟩ = Σ c_j (−1)^{r_j} ψ^{(r_j)}(a_j)`.
    pub fn pair(&self, psi: &TestFunction) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let d = psi.derivative(t.location.to_f64(), t.order)?;
            let sign = if t.order % 2 == 0 { 1.0 } else { -1.0 };
            total += t.coeff.to_c64() * d * sign;
        }
        Ok(total)
    }

    /// Float-mode equality: keys aligned, missing keys read as zero,
    /// coefficients compared with [`Scalar::coeff_eq`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        let zero = C::zero();
        let mut keys: Vec<(RationalPoint, u32)> = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|t| (t.location, t.order))
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().all(|(a, r)| {
            let x = self.coeff(a, r);
            let y = other.coeff(a, r);
            x.coeff_eq(&y) || (x.is_zero() && y.coeff_eq(&zero))
        })
    }

    /// Largest coefficient modulus; zero for the zero distribution.
    pub fn max_coeff_modulus(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.modulus())
            .fold(0.0, f64::max)
    }

    pub fn to_float(&self) -> Distribution<Complex64> {
        Distribution::canonicalize(
            self.terms
                .iter()
                .map(|t| PointTerm::new(t.coeff.to_c64(), t.location, t.order)),
        )
    }

    pub fn map_scalar<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Distribution<D> {
        Distribution::canonicalize(
            self.terms
                .iter()
                .map(|t| PointTerm::new(f(&t.coeff), t.location, t.order)),
        )
    }
}

fn accumulate<K: Ord, C: Scalar>(acc: &mut BTreeMap<K, C>, key: K, value: C) {
    match acc.remove(&key) {
        Some(prev) => {
            acc.insert(key, prev + value);
        }
        None => {
            acc.insert(key, value);
        }
    }
}

/// `max_ψ |⟨D1 − D2, ψ⟩|` over a nonempty battery.
pub fn weak_distance<C: Scalar>(
    d1: &Distribution<C>,
    d2: &Distribution<C>,
    battery: &[TestFunction],
) -> Result<f64> {
    if battery.is_empty() {
        return Err(Error::EmptyBattery);
    }
    let diff = d1.sub(d2);
    battery.iter().try_fold(0.0_f64, |acc, psi| {
        Ok(acc.max(diff.pair(psi)?.norm()))
    })
}

/// `c·δ_a^(r) + …`, or `0`.
impl<C: Scalar + std::fmt::Display> std::fmt::Display for Distribution<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.terms().iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·δ_{{{}}}", t.coeff, t.location)?;
            if t.order > 0 {
                write!(f, "^({})", t.order)?;
            }
        }
        Ok(())
    }
}

impl<C: Scalar> Add for &Distribution<C> {
    type Output = Distribution<C>;
    fn add(self, rhs: Self) -> Distribution<C> {
        Distribution::add(self, rhs)
    }
}

impl<C: Scalar> Sub for &Distribution<C> {
    type Output = Distribution<C>;
    fn sub(self, rhs: Self) -> Distribution<C> {
        Distribution::sub(self, rhs)
    }
}

impl<C: Scalar> Neg for &Distribution<C> {
    type Output = Distribution<C>;
    fn neg(self) -> Distribution<C> {
        Distribution::neg(self)
    }
}

/// Convolution.
impl<C: Scalar> Mul for &Distribution<C> {
    type Output = Distribution<C>;
    fn mul(self, rhs: Self) -> Distribution<C> {
        self.convolve(rhs)
    }
}
