use std::collections::BTreeMap;

use super::{Distribution, PointTerm, RationalPoint};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `Σ_k c_k δ_{k/n}`: an order-0 distribution on the `1/n` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracComb<C> {
    denominator: u64,
    coeffs: BTreeMap<i64, C>,
}

impl<C: Scalar> DiracComb<C> {
    /// Panics if `denominator == 0`.
    pub fn new(denominator: u64) -> Self {
        assert!(denominator >= 1, "comb denominator must be positive");
        Self {
            denominator,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_coeffs(denominator: u64, coeffs: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut comb = Self::new(denominator);
        for (k, c) in coeffs {
            comb.add_at(k, c);
        }
        comb
    }

    pub fn add_at(&mut self, index: i64, c: C) {
        let sum = match self.coeffs.remove(&index) {
            Some(prev) => prev + c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(index, sum);
        }
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn coeff(&self, index: i64) -> C {
        self.coeffs.get(&index).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `max |k|` over nonzero coefficients, `None` for the zero comb.
    pub fn max_abs_index(&self) -> Option<i64> {
        self.coeffs.keys().map(|k| k.abs()).max()
    }

    pub fn location(&self, index: i64) -> RationalPoint {
        RationalPoint::new(index, self.denominator as i64).expect("positive denominator")
    }

    pub fn to_distribution(&self) -> Distribution<C> {
        Distribution::canonicalize(
            self.coeffs
                .iter()
                .map(|(k, c)| PointTerm::new(c.clone(), self.location(*k), 0)),
        )
    }

    /// Read a distribution as a comb on the `1/n` grid.
    pub fn from_distribution(d: &Distribution<C>, denominator: u64) -> Result<Self> {
        let mut comb = Self::new(denominator);
        for t in d.terms() {
            let off_grid = || Error::OffGrid {
                location: t.location.to_string(),
                order: t.order,
                denominator,
            };
            if t.order != 0 {
                return Err(off_grid());
            }
            let k = t.location.grid_index(denominator).ok_or_else(off_grid)?;
            comb.add_at(k, t.coeff.clone());
        }
        Ok(comb)
    }

    /// Same comb on the finer grid `1/(n·factor)`.
    pub fn refine(&self, factor: u64) -> Self {
        let f = factor as i64;
        Self {
            denominator: self.denominator * factor,
            coeffs: self.coeffs.iter().map(|(k, c)| (k * f, c.clone())).collect(),
        }
    }
}
