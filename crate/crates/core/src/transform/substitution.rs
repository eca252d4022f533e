//! `T̂Û + ŜV̂ − 1` through the substitution `c·δ_{k/N}^{(r)} ↦ c·ζ^r·w^k`.

use std::any::Any;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::{Float, One, ToPrimitive, Zero};
use twofloat::TwoFloat;

use super::GridSpec;
use crate::bezout::{clear_denominators, GaussInt};
use crate::distr::Distribution;
use crate::scalar::{GaussianRational, Scalar};

/// `None` when the exponents overflow `i64`.
pub(super) fn residual<C: Scalar>(parts: [&Distribution<C>; 4], grid: &GridSpec) -> Option<f64> {
    let n = common_denominator(&parts)?;
    let points = grid.disk_points().map(move |z| {
        let zeta = Complex64::new(0.0, 2.0 * PI) * z;
        (zeta, (-zeta / n as f64).exp())
    });
    let exact = parts.map(|d| (d as &dyn Any).downcast_ref::<Distribution<GaussianRational>>());
    if let [Some(t), Some(s), Some(u), Some(v)] = exact {
        let lifted = [t, s, u, v].map(|d| ExactPart::new(d, n));
        let [t, s, u, v] = match lifted {
            [Some(t), Some(s), Some(u), Some(v)] => [t, s, u, v],
            _ => return None,
        };
        return Some(points.map(|(zeta, w)| exact_residual([&t, &s, &u, &v], zeta, w)).fold(0.0, f64::max));
    }
    let lifted = FloatParts::new(&parts, n)?;
    Some(
        points
            .map(|(zeta, w)| {
                let at = Substitution::new(zeta, w, &lifted);
                let [t, s, u, v] = [0, 1, 2, 3].map(|i| at.eval(&lifted.terms[i]));
                (t * u + s * v - Dd::one()).to_c64().norm()
            })
            .fold(0.0, f64::max),
    )
}

fn common_denominator<C: Scalar>(parts: &[&Distribution<C>]) -> Option<i64> {
    let mut n: i64 = 1;
    for d in parts {
        for t in d.terms() {
            let den = t.location.denom();
            n = n.checked_mul(den / num_integer::gcd(n, den))?;
        }
    }
    Some(n)
}

fn exponent(location: &crate::distr::RationalPoint, n: i64) -> Option<i64> {
    location.numer().checked_mul(n / location.denom())
}

/// `d = (1/scale)·Σ_k Σ_r g_{k,r} ζ^r w^k` with `g` over `ℤ[i]`, dense in `k`.
struct ExactPart {
    scale: BigInt,
    kmin: i64,
    kmax: i64,
    max_order: u32,
    rows: Vec<Vec<(u32, GaussInt)>>,
}

impl ExactPart {
    fn new(d: &Distribution<GaussianRational>, n: i64) -> Option<Self> {
        let coeffs: Vec<GaussianRational> = d.terms().iter().map(|t| t.coeff.clone()).collect();
        let (scale, ints) = clear_denominators(&coeffs);
        let ks = d.terms().iter().map(|t| exponent(&t.location, n)).collect::<Option<Vec<i64>>>()?;
        let kmin = ks.iter().copied().min().unwrap_or(0);
        let kmax = ks.iter().copied().max().unwrap_or(0);
        let mut rows = vec![Vec::new(); (kmax - kmin + 1) as usize];
        for ((t, k), g) in d.terms().iter().zip(&ks).zip(ints) {
            rows[(k - kmin) as usize].push((t.order, g));
        }
        Some(Self {
            scale,
            kmin,
            kmax,
            max_order: d.max_order(),
            rows,
        })
    }

    /// `(I, s)` with `d̂ = I·W^{kmin} / (scale·2^s)` at `ζ = Z/2^f`, `w = W/2^e`.
    fn eval(&self, zeta_pows: &[GaussInt], f: u64, (w, e): (&GaussInt, u64)) -> (GaussInt, i64) {
        let top = self.max_order as u64;
        let row_value = |row: &[(u32, GaussInt)]| -> GaussInt {
            match row {
                [] => gi_zero(),
                [(0, g)] if top == 0 => g.clone(),
                _ => {
                    let mut acc = gi_zero();
                    for (r, g) in row {
                        acc += shl(&(g * &zeta_pows[*r as usize]), f * (top - *r as u64));
                    }
                    acc
                }
            }
        };
        let span = (self.kmax - self.kmin) as u64;
        let mut acc = row_value(&self.rows[span as usize]);
        for (i, row) in self.rows.iter().enumerate().rev().skip(1) {
            acc = &acc * w;
            if !row.is_empty() {
                acc += shl(&row_value(row), e * (span - i as u64));
            }
        }
        (acc, (f * top) as i64 + e as i64 * self.kmax)
    }
}

fn gi_zero() -> GaussInt {
    Complex::new(BigInt::zero(), BigInt::zero())
}

fn shl(g: &GaussInt, bits: u64) -> GaussInt {
    Complex::new(&g.re << bits, &g.im << bits)
}

fn gi_pow(g: &GaussInt, mut e: u64) -> GaussInt {
    let (mut acc, mut base) = (Complex::new(BigInt::one(), BigInt::zero()), g.clone());
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// `x = G/2^e` exactly.
fn dyadic(x: Complex64) -> (GaussInt, u64) {
    let parts = [x.re, x.im].map(|v| {
        let (mant, exp, sign) = v.integer_decode();
        (BigInt::from(mant) * i64::from(sign), if mant == 0 { 0 } else { exp })
    });
    let e = parts.iter().map(|p| -(p.1 as i64)).max().unwrap_or(0).max(0);
    let [re, im] = parts.map(|(m, exp)| m << (exp as i64 + e) as u64);
    (Complex::new(re, im), e as u64)
}

fn log2_big(n: &BigInt) -> Option<f64> {
    if n.is_zero() {
        return None;
    }
    let bits = n.bits();
    let shift = bits.saturating_sub(60);
    let top = (n.magnitude() >> shift).to_f64()?;
    Some(top.log2() + shift as f64)
}

fn log2_abs(g: &GaussInt) -> Option<f64> {
    log2_big(&(&g.re * &g.re + &g.im * &g.im)).map(|x| x / 2.0)
}

/// `|T̂Û + ŜV̂ − 1|` exactly at the dyadic `(ζ, w)`, rounded once at the end.
fn exact_residual(parts: [&ExactPart; 4], zeta: Complex64, w: Complex64) -> f64 {
    let (z, f) = dyadic(zeta);
    let (wi, e) = dyadic(w);
    let top = parts.iter().map(|p| p.max_order).max().unwrap_or(0);
    let mut zeta_pows = vec![Complex::new(BigInt::one(), BigInt::zero())];
    for _ in 0..top {
        let next = zeta_pows.last().unwrap() * &z;
        zeta_pows.push(next);
    }
    let [t, s, u, v] = parts.map(|p| p.eval(&zeta_pows, f, (&wi, e)));
    let [pt, ps, pu, pv] = parts;
    let (a_num, a_exp, a_den, a_shift) = (&t.0 * &u.0, pt.kmin + pu.kmin, &pt.scale * &pu.scale, t.1 + u.1);
    let (b_num, b_exp, b_den, b_shift) = (&s.0 * &v.0, ps.kmin + pv.kmin, &ps.scale * &pv.scale, s.1 + v.1);
    let m = a_exp.min(b_exp).min(0);
    let sigma = a_shift.max(b_shift).max(0);
    let n1 = shl(&(a_num * gi_pow(&wi, (a_exp - m) as u64) * &b_den), (sigma - a_shift) as u64);
    let n2 = shl(&(b_num * gi_pow(&wi, (b_exp - m) as u64) * &a_den), (sigma - b_shift) as u64);
    let den = &a_den * &b_den;
    let n3 = shl(&(gi_pow(&wi, (-m) as u64) * &den), sigma as u64);
    let Some(log_num) = log2_abs(&(n1 + n2 - n3)) else {
        return 0.0;
    };
    let log_w = w.norm().log2() + e as f64;
    let log_den = log2_big(&den).unwrap_or(0.0) + sigma as f64;
    (log_num + m as f64 * log_w - log_den).exp2()
}

/// Terms `(coeff, order, k)` in double-double over a shared denominator `N`.
struct FloatParts {
    terms: Vec<Vec<(Dd, u32, i64)>>,
    max_order: u32,
    min_exp: i64,
    max_exp: u64,
}

impl FloatParts {
    fn new<C: Scalar>(parts: &[&Distribution<C>], n: i64) -> Option<Self> {
        let terms = parts
            .iter()
            .map(|d| {
                d.terms()
                    .iter()
                    .map(|t| {
                        let (hi, lo) = t.coeff.to_c64_split();
                        Some((Dd::from_split(hi, lo), t.order, exponent(&t.location, n)?))
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        let all = || terms.iter().flatten();
        let max_order = all().map(|t| t.1).max().unwrap_or(0);
        let min_exp = all().map(|t| t.2).min().unwrap_or(0).min(0);
        let max_exp = all().map(|t| t.2).max().unwrap_or(0).max(0) as u64;
        Some(Self {
            terms,
            max_order,
            min_exp,
            max_exp,
        })
    }
}

/// Powers of `ζ` and `w` at one point.
struct Substitution {
    zeta_pows: Vec<Dd>,
    w_pows: Vec<Dd>,
    w_inv_pows: Vec<Dd>,
    w: Dd,
    w_inv: Dd,
}

/// Exponent range covered by the power tables.
const POWER_TABLE: u64 = 4096;

impl Substitution {
    fn new(zeta: Complex64, w: Complex64, lifted: &FloatParts) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let (zeta, w) = (Dd::from_split(zeta, zero), Dd::from_split(w, zero));
        let w_inv = w.recip();
        let table = |base: Dd, top: u64| -> Vec<Dd> {
            let mut out = vec![Dd::one()];
            for _ in 0..top {
                out.push(*out.last().unwrap() * base);
            }
            out
        };
        Self {
            zeta_pows: table(zeta, lifted.max_order as u64),
            w_pows: table(w, lifted.max_exp.min(POWER_TABLE)),
            w_inv_pows: table(w_inv, lifted.min_exp.unsigned_abs().min(POWER_TABLE)),
            w,
            w_inv,
        }
    }

    fn w_power(&self, k: i64) -> Dd {
        let (table, base) = if k < 0 { (&self.w_inv_pows, self.w_inv) } else { (&self.w_pows, self.w) };
        let e = k.unsigned_abs();
        match table.get(e as usize) {
            Some(p) => *p,
            None => base.powu(e),
        }
    }

    fn eval(&self, terms: &[(Dd, u32, i64)]) -> Dd {
        let mut total = Dd::zero();
        for &(c, order, k) in terms {
            total = total + c * self.zeta_pows[order as usize] * self.w_power(k);
        }
        total
    }
}

/// Complex double-double.
#[derive(Clone, Copy, Debug)]
struct Dd {
    re: TwoFloat,
    im: TwoFloat,
}

impl Dd {
    fn zero() -> Self {
        Self::from_split(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    fn one() -> Self {
        Self::from_split(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    fn from_split(hi: Complex64, lo: Complex64) -> Self {
        Self {
            re: TwoFloat::new_add(hi.re, lo.re),
            im: TwoFloat::new_add(hi.im, lo.im),
        }
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(f64::from(self.re), f64::from(self.im))
    }

    fn recip(self) -> Self {
        let n = self.re * self.re + self.im * self.im;
        Self {
            re: self.re / n,
            im: -self.im / n,
        }
    }

    fn powu(self, mut e: u64) -> Self {
        let (mut acc, mut base) = (Self::one(), self);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl std::ops::Add for Dd {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl std::ops::Sub for Dd {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl std::ops::Mul for Dd {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}
