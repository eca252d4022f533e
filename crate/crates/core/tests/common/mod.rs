//! Random generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use dirac_bezout::distr::{DiracComb, Distribution, PointTerm, RationalPoint};
use dirac_bezout::laurent::LaurentPoly;
use dirac_bezout::{GaussianRational as Q, Scalar};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rational(rng: &mut ChaCha8Rng, bound: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-bound..=bound)), BigInt::from(rng.gen_range(1..=bound)))
}

/// Gaussian rational with numerators and denominators bounded by `bound`.
pub fn gauss(rng: &mut ChaCha8Rng, bound: i64) -> Q {
    let im = if rng.gen_bool(0.5) { rational(rng, bound) } else { BigRational::zero() };
    Q::new(rational(rng, bound), im)
}

pub fn nonzero_gauss(rng: &mut ChaCha8Rng, bound: i64) -> Q {
    loop {
        let c = gauss(rng, bound);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn point(rng: &mut ChaCha8Rng, bound: i64) -> RationalPoint {
    RationalPoint::new(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound)).unwrap()
}

pub fn distribution(rng: &mut ChaCha8Rng, max_terms: usize, max_order: u32, bound: i64) -> Distribution<Q> {
    let n = rng.gen_range(0..=max_terms);
    Distribution::canonicalize((0..n).map(|_| {
        PointTerm::new(gauss(rng, bound), point(rng, bound), rng.gen_range(0..=max_order))
    }))
}

pub fn laurent(rng: &mut ChaCha8Rng, lo: i64, hi: i64, bound: i64) -> LaurentPoly<Q> {
    let n = rng.gen_range(0..=(hi - lo + 1) as usize);
    LaurentPoly::from_terms((0..n).map(|_| (rng.gen_range(lo..=hi), gauss(rng, bound))))
}

/// Coefficient table keyed by `(location, order)`, zeros dropped.
pub type Table = BTreeMap<(RationalPoint, u32), Q>;

pub fn table(d: &Distribution<Q>) -> Table {
    let mut t = Table::new();
    for term in d.terms() {
        accumulate(&mut t, (term.location, term.order), term.coeff.clone());
    }
    t
}

fn accumulate(t: &mut Table, key: (RationalPoint, u32), c: Q) {
    let entry = t.entry(key).or_insert_with(Q::zero);
    *entry = entry.clone() + c;
    if entry.is_zero() {
        t.remove(&key);
    }
}

/// `δ_a^(r) ∗ δ_b^(s) = δ_{a+b}^(r+s)`, summed over all pairs.
pub fn naive_convolve(a: &Table, b: &Table) -> Table {
    let mut out = Table::new();
    for ((la, ra), ca) in a {
        for ((lb, rb), cb) in b {
            accumulate(&mut out, (*la + *lb, ra + rb), ca.clone() * cb.clone());
        }
    }
    out
}

pub fn add_tables(a: &Table, b: &Table) -> Table {
    let mut out = a.clone();
    for (k, c) in b {
        accumulate(&mut out, *k, c.clone());
    }
    out
}

/// Comb coefficients as index map.
pub fn comb_map<C: Scalar>(c: &DiracComb<C>) -> BTreeMap<i64, C> {
    c.iter().map(|(k, v)| (k, v.clone())).collect()
}

/// `max_ℓ |T∗U + S∗V − δ_0|` on comb coefficients, by schoolbook products.
pub fn comb_bezout_residual<C: Scalar>(t: &DiracComb<C>, s: &DiracComb<C>, u: &DiracComb<C>, v: &DiracComb<C>) -> f64 {
    let mut acc: BTreeMap<i64, C> = BTreeMap::new();
    for (x, y) in [(t, u), (s, v)] {
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let e = acc.entry(i + j).or_insert_with(C::zero);
                *e = e.clone() + a.clone() * b.clone();
            }
        }
    }
    let e = acc.entry(0).or_insert_with(C::zero);
    *e = e.clone() - C::one();
    acc.values().map(|c| c.modulus()).fold(0.0, f64::max)
}

/// `(max_ℓ |a_ℓ − b_ℓ|, Σ_ℓ |a_ℓ − b_ℓ|)`.
pub fn comb_distance<C: Scalar>(a: &DiracComb<C>, b: &DiracComb<C>) -> (f64, f64) {
    let (ma, mb) = (comb_map(a), comb_map(b));
    let keys: std::collections::BTreeSet<i64> = ma.keys().chain(mb.keys()).copied().collect();
    let mut max: f64 = 0.0;
    let mut sum = 0.0;
    for k in keys {
        let d = (ma.get(&k).cloned().unwrap_or_else(C::zero) - mb.get(&k).cloned().unwrap_or_else(C::zero)).modulus();
        max = max.max(d);
        sum += d;
    }
    (max, sum)
}

/// `Σ c (2πiz)^r e^{−2πiaz}` with powers from `powi`.
pub fn direct_transform<C: Scalar>(d: &Distribution<C>, z: Complex64) -> Complex64 {
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    d.terms()
        .iter()
        .map(|t| t.coeff.to_c64() * (two_pi_i * z).powi(t.order as i32) * (-two_pi_i * t.location.to_f64() * z).exp())
        .sum()
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rule(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn go(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = rule(fa, flm, fm, a, m);
        let right = rule(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        go(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + go(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    go(f, a, b, fa, fm, fb, rule(fa, fm, fb, a, b), tol, 50)
}

/// `exp(−1/(1−x²))` on `(−1, 1)`.
pub fn raw_bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
