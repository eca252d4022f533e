//! Bézout cofactors `p·u + q·v = 1` for coprime ordinary polynomials.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

use crate::distr::{Distribution, RationalPoint};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::{GaussianRational, Scalar};

/// Coefficient residual allowed for a float cofactor solve.
pub const RESIDUAL_GATE: f64 = 1e-9;

/// Coefficient fields with a Bézout solver.
pub trait CofactorField: Scalar {
    fn cofactors(p: &LaurentPoly<Self>, q: &LaurentPoly<Self>) -> Result<(LaurentPoly<Self>, LaurentPoly<Self>)>;

    /// `max |coeff| of T∗U + S∗V − δ_0`.
    fn bezout_defect(
        t: &Distribution<Self>,
        s: &Distribution<Self>,
        u: &Distribution<Self>,
        v: &Distribution<Self>,
    ) -> f64 {
        t.convolve(u)
            .add(&s.convolve(v))
            .sub(&Distribution::identity())
            .max_coeff_modulus()
    }
}

/// `‖p·u + q·v − 1‖∞` over coefficients.
pub fn identity_residual<C: Scalar>(
    p: &LaurentPoly<C>,
    q: &LaurentPoly<C>,
    u: &LaurentPoly<C>,
    v: &LaurentPoly<C>,
) -> f64 {
    (&(p * u) + &(q * v)).sub(&LaurentPoly::one()).max_coeff_modulus()
}

/// Cofactors with `deg u < deg q` and `deg v < deg p` when both degrees are
/// positive; a nonzero constant `c` on either side gives `1/c` and `0`.
pub fn bezout_cofactors<C: CofactorField>(
    p: &LaurentPoly<C>,
    q: &LaurentPoly<C>,
) -> Result<(LaurentPoly<C>, LaurentPoly<C>)> {
    for poly in [p, q] {
        if poly.valuation().is_some_and(|v| v < 0) {
            return Err(Error::InvalidArgument(
                "cofactors need ordinary polynomials (no negative exponents)".into(),
            ));
        }
    }
    if p.is_unit_constant() {
        let c = p.coeff(0).inv().expect("nonzero constant");
        return Ok((LaurentPoly::monomial(c, 0), LaurentPoly::zero()));
    }
    if q.is_unit_constant() {
        let c = q.coeff(0).inv().expect("nonzero constant");
        return Ok((LaurentPoly::zero(), LaurentPoly::monomial(c, 0)));
    }
    if p.is_zero() || q.is_zero() {
        return Err(Error::NotCoprime { residual: 1.0 });
    }
    C::cofactors(p, q)
}

impl CofactorField for Complex64 {
    fn cofactors(p: &LaurentPoly<Self>, q: &LaurentPoly<Self>) -> Result<(LaurentPoly<Self>, LaurentPoly<Self>)> {
        let (u, v) = sylvester_solve(p, q);
        let residual = identity_residual(p, q, &u, &v);
        if !(residual <= RESIDUAL_GATE) {
            return Err(Error::NotCoprime { residual });
        }
        Ok((u, v))
    }
}

/// Least-squares solve of the Sylvester system with one refinement pass.
fn sylvester_solve(
    p: &LaurentPoly<Complex64>,
    q: &LaurentPoly<Complex64>,
) -> (LaurentPoly<Complex64>, LaurentPoly<Complex64>) {
    let dp = p.degree().expect("nonzero") as usize;
    let dq = q.degree().expect("nonzero") as usize;
    let size = dp + dq;
    // unit-scale both inputs; the cofactors absorb the scale afterwards
    let sp = 1.0 / p.max_coeff_modulus();
    let sq = 1.0 / q.max_coeff_modulus();
    let pc = p.dense(0, dp as i64);
    let qc = q.dense(0, dq as i64);
    let mut m = DMatrix::<Complex64>::zeros(size, size);
    for j in 0..dq {
        for (i, c) in pc.iter().enumerate() {
            m[(i + j, j)] = c * sp;
        }
    }
    for j in 0..dp {
        for (i, c) in qc.iter().enumerate() {
            m[(i + j, dq + j)] = c * sq;
        }
    }
    let mut rhs = DVector::<Complex64>::zeros(size);
    rhs[0] = Complex64::one();

    let svd = m.clone().svd(true, true);
    let solve = |b: &DVector<Complex64>| {
        svd.solve(b, 0.0)
            .unwrap_or_else(|_| DVector::<Complex64>::zeros(size))
    };
    let mut x = solve(&rhs);
    for _ in 0..2 {
        let r = &rhs - &m * &x;
        x += solve(&r);
    }
    let u = LaurentPoly::from_dense(0, (0..dq).map(|j| x[j] * sp));
    let v = LaurentPoly::from_dense(0, (0..dp).map(|j| x[dq + j] * sq));
    (u, v)
}

pub(crate) type GaussInt = Complex<BigInt>;

fn gi_zero() -> GaussInt {
    Complex::new(BigInt::zero(), BigInt::zero())
}

fn gi_is_zero(a: &GaussInt) -> bool {
    a.re.is_zero() && a.im.is_zero()
}

/// `a / b`, exact by construction in Bareiss elimination.
fn gi_div_exact(a: &GaussInt, b: &GaussInt) -> GaussInt {
    let n = &b.re * &b.re + &b.im * &b.im;
    let t = a * b.conj();
    debug_assert!((&t.re % &n).is_zero() && (&t.im % &n).is_zero());
    Complex::new(t.re / &n, t.im / n)
}

/// Scale so every coefficient is a Gaussian integer; returns `(D, D·p)`.
pub(crate) fn clear_denominators(p: &[GaussianRational]) -> (BigInt, Vec<GaussInt>) {
    let d = p
        .iter()
        .flat_map(|c| [c.re.denom().clone(), c.im.denom().clone()])
        .fold(BigInt::one(), |acc, x| acc.lcm(&x));
    let scaled = p
        .iter()
        .map(|c| {
            Complex::new(
                c.re.numer() * (&d / c.re.denom()),
                c.im.numer() * (&d / c.im.denom()),
            )
        })
        .collect();
    (d, scaled)
}

/// Solve `M·x = e_0` for the Sylvester matrix of `(p, q)` by fraction-free
/// elimination over `ℤ[i]`. `None` when the matrix is singular.
fn sylvester_exact(p: &[GaussianRational], q: &[GaussianRational]) -> Option<(Dense, Dense)> {
    let (dp, dq) = (p.len() - 1, q.len() - 1);
    let size = dp + dq;
    let (scale_p, pi) = clear_denominators(p);
    let (scale_q, qi) = clear_denominators(q);
    // augmented matrix, column `size` holds the right-hand side
    let mut m = vec![vec![gi_zero(); size + 1]; size];
    for j in 0..dq {
        for (i, c) in pi.iter().enumerate() {
            m[i + j][j] = c.clone();
        }
    }
    for j in 0..dp {
        for (i, c) in qi.iter().enumerate() {
            m[i + j][dq + j] = c.clone();
        }
    }
    m[0][size] = Complex::new(BigInt::one(), BigInt::zero());

    let mut prev = Complex::new(BigInt::one(), BigInt::zero());
    for k in 0..size {
        let pivot_row = (k..size).find(|&r| !gi_is_zero(&m[r][k]))?;
        m.swap(k, pivot_row);
        for r in (k + 1)..size {
            for c in (k + 1)..=size {
                let v = &m[r][c] * &m[k][k] - &m[r][k] * &m[k][c];
                m[r][c] = gi_div_exact(&v, &prev);
            }
            m[r][k] = gi_zero();
        }
        prev = m[k][k].clone();
    }
    // y = det·x is integral, so back substitution divides exactly
    let det = prev;
    let mut y = vec![gi_zero(); size];
    for i in (0..size).rev() {
        let mut acc = &det * &m[i][size];
        for j in (i + 1)..size {
            acc -= &m[i][j] * &y[j];
        }
        y[i] = gi_div_exact(&acc, &m[i][i]);
    }
    let det_inv = GaussianRational::new(
        BigRational::from_integer(det.re.clone()),
        BigRational::from_integer(det.im.clone()),
    )
    .inv()?;
    let lift = |v: &GaussInt, s: &BigInt| {
        GaussianRational::new(
            BigRational::from_integer(&v.re * s),
            BigRational::from_integer(&v.im * s),
        ) * det_inv.clone()
    };
    let u = y[..dq].iter().map(|v| lift(v, &scale_p)).collect();
    let w = y[dq..].iter().map(|v| lift(v, &scale_q)).collect();
    Some((u, w))
}

type Sparse = BTreeMap<(RationalPoint, u32), GaussInt>;

/// `(D, D·d)` with `D·d` held as Gaussian-integer coefficients.
fn integral_form(d: &Distribution<GaussianRational>) -> (BigInt, Sparse) {
    let coeffs: Vec<GaussianRational> = d.terms().iter().map(|t| t.coeff.clone()).collect();
    let (scale, ints) = clear_denominators(&coeffs);
    let map = d
        .terms()
        .iter()
        .zip(ints)
        .map(|(t, c)| ((t.location, t.order), c))
        .collect();
    (scale, map)
}

fn sparse_convolve(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for ((la, ra), ca) in a {
        for ((lb, rb), cb) in b {
            let entry = out.entry((*la + *lb, ra + rb)).or_insert_with(gi_zero);
            *entry += ca * cb;
        }
    }
    out
}

fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    BigRational::new_raw(n.clone(), d.clone()).to_f64().unwrap_or(f64::INFINITY)
}

type Dense = Vec<GaussianRational>;

fn trim(mut a: Dense) -> Dense {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

impl CofactorField for GaussianRational {
    fn cofactors(p: &LaurentPoly<Self>, q: &LaurentPoly<Self>) -> Result<(LaurentPoly<Self>, LaurentPoly<Self>)> {
        let a = trim(p.dense(0, p.degree().expect("nonzero")));
        let b = trim(q.dense(0, q.degree().expect("nonzero")));
        let (u, v) = sylvester_exact(&a, &b).ok_or(Error::NotCoprime { residual: 1.0 })?;
        Ok((LaurentPoly::from_dense(0, u), LaurentPoly::from_dense(0, v)))
    }

    /// Same value as the generic version, computed over `ℤ[i]` after one
    /// common-denominator pass so no intermediate gcds are taken.
    fn bezout_defect(
        t: &Distribution<Self>,
        s: &Distribution<Self>,
        u: &Distribution<Self>,
        v: &Distribution<Self>,
    ) -> f64 {
        let (dt, it) = integral_form(t);
        let (ds, is) = integral_form(s);
        let (du, iu) = integral_form(u);
        let (dv, iv) = integral_form(v);
        let (wa, wb) = (&ds * &dv, &dt * &du);
        let denom = &wa * &wb;
        let mut total = Sparse::new();
        for (key, c) in sparse_convolve(&it, &iu) {
            *total.entry(key).or_insert_with(gi_zero) += c * &wa;
        }
        for (key, c) in sparse_convolve(&is, &iv) {
            *total.entry(key).or_insert_with(gi_zero) += c * &wb;
        }
        *total.entry((RationalPoint::ZERO, 0)).or_insert_with(gi_zero) -= Complex::new(denom.clone(), BigInt::zero());
        total
            .values()
            .filter(|c| !gi_is_zero(c))
            .map(|c| ratio_to_f64(&c.re, &denom).hypot(ratio_to_f64(&c.im, &denom)))
            .fold(0.0, f64::max)
    }
}
