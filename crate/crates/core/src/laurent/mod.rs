//! The Laurent polynomial ring `C[z, z⁻¹]` and its isomorphism `Φ` onto
//! order-0 combs on the `1/n` grid (`Φ(z) = δ_{1/n}`, `Φ(1) = δ_0`).

mod roots;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub use roots::{expand_from_roots, roots, roots_with, RootOptions, RootSet, CLUSTER_RADIUS};

use crate::distr::DiracComb;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sparse `Σ c_k z^k`, `k ∈ ℤ`, with no zero coefficients stored.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<C> {
    coeffs: BTreeMap<i64, C>,
}

impl<C: Scalar> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> LaurentPoly<C> {
    pub fn zero() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    pub fn monomial(c: C, exp: i64) -> Self {
        Self::from_terms([(exp, c)])
    }

    /// `z`.
    pub fn z() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    /// Ascending dense coefficients starting at exponent `offset`.
    pub fn from_dense(offset: i64, coeffs: impl IntoIterator<Item = C>) -> Self {
        Self::from_terms(coeffs.into_iter().enumerate().map(|(i, c)| (offset + i as i64, c)))
    }

    pub fn add_term(&mut self, exp: i64, c: C) {
        let sum = match self.coeffs.remove(&exp) {
            Some(prev) => prev + c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(exp, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> C {
        self.coeffs.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest exponent; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.coeffs.values().next_back()
    }

    /// Nonzero constant.
    pub fn is_unit_constant(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.contains_key(&0)
    }

    /// Dense ascending coefficients from exponent `lo` through `hi` inclusive.
    pub fn dense(&self, lo: i64, hi: i64) -> Vec<C> {
        (lo..=hi).map(|k| self.coeff(k)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, s.clone() * c.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                out.add_term(i + j, a.clone() * b.clone());
            }
        }
        out
    }

    /// `z^k · self`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Evaluation in the coefficient field; `None` at `z = 0` when a negative
    /// exponent is present.
    pub fn eval(&self, z: &C) -> Option<C> {
        let zi = if self.valuation().is_some_and(|v| v < 0) {
            Some(z.inv()?)
        } else {
            None
        };
        let mut total = C::zero();
        for (k, c) in self.terms() {
            let base = if k < 0 { zi.clone()? } else { z.clone() };
            let mut pow = C::one();
            for _ in 0..k.unsigned_abs() {
                pow = pow * base.clone();
            }
            total = total + c.clone() * pow;
        }
        Some(total)
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.terms()
            .map(|(k, c)| c.to_c64() * z.powi(k as i32))
            .sum()
    }

    /// Largest coefficient modulus.
    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.values().map(|c| c.modulus()).fold(0.0, f64::max)
    }

    pub fn to_float(&self) -> LaurentPoly<Complex64> {
        LaurentPoly::from_terms(self.terms().map(|(k, c)| (k, c.to_c64())))
    }

    pub fn map_scalar<D: Scalar>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.terms().map(|(k, c)| (k, f(c))))
    }
}

impl<C: Scalar> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        LaurentPoly::add(self, rhs)
    }
}

impl<C: Scalar> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        LaurentPoly::sub(self, rhs)
    }
}

impl<C: Scalar> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        LaurentPoly::mul(self, rhs)
    }
}

impl<C: Scalar> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly::neg(self)
    }
}

/// `Φ(Σ c_k z^k) = Σ c_k δ_{k/n}`. Panics if `n == 0`.
pub fn phi<C: Scalar>(p: &LaurentPoly<C>, n: u64) -> DiracComb<C> {
    DiracComb::from_coeffs(n, p.terms().map(|(k, c)| (k, c.clone())))
}

/// Inverse of `Φ` on its image.
pub fn phi_inverse<C: Scalar>(comb: &DiracComb<C>) -> LaurentPoly<C> {
    LaurentPoly::from_terms(comb.iter().map(|(k, c)| (k, c.clone())))
}

/// Read an arbitrary distribution through `Φ⁻¹`, rejecting off-grid or
/// differentiated terms.
pub fn phi_inverse_distribution<C: Scalar>(
    d: &crate::distr::Distribution<C>,
    n: u64,
) -> Result<LaurentPoly<C>> {
    DiracComb::from_distribution(d, n).map(|c| phi_inverse(&c))
}

/// `Σ_{ℓ=−L}^{L} t_ℓ z^{ℓ+L}` for a comb supported in `{−L..L}/n`.
pub fn comb_to_centered_poly<C: Scalar>(comb: &DiracComb<C>, bound: i64) -> Result<LaurentPoly<C>> {
    if let Some(index) = comb.iter().map(|(k, _)| k).find(|k| k.abs() > bound) {
        return Err(Error::SupportExceeded { index, bound });
    }
    Ok(phi_inverse(comb).shift(bound))
}
