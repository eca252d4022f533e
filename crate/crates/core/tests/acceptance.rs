//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::time::{Duration, Instant};

use common::*;
use dirac_bezout::bezout::{unimodular_approx_pair, PipelineOptions, UnimodularQuadruple};
use dirac_bezout::distr::{DiracComb, Distribution, Inverse, PointTerm, RationalPoint};
use dirac_bezout::laurent::{phi, phi_inverse, LaurentPoly};
use dirac_bezout::mollify::{
    default_schedule, minimal_index, mollify, riemann_comb, sample_step, standard_battery, BumpSpec, TestFunction,
    BUMP_MASS,
};
use dirac_bezout::transform::{
    detect_zero, fl_eval, pw_constants, transform_bezout_residual, GridSpec,
};
use dirac_bezout::{GaussianRational as Q, Scalar};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RESIDUAL_TOL: f64 = 1e-9;
const WITNESS_TOL: f64 = 1e-10;
const WITNESS_ZERO_TOL: f64 = 1e-3;
const TRANSFORM_TOL: f64 = 1e-6;
const TRANSFORM_GRID: usize = 101;
const SLOPE_MAX: f64 = -0.9;
const PW_SLACK: f64 = 1e-12;
const SUP_SAMPLES_PER_UNIT: f64 = 2000.0;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

/// Distributions handed to the certificate criterion.
#[derive(Default)]
struct Corpus {
    exact: Vec<Distribution<Q>>,
    float: Vec<Distribution<Complex64>>,
    quadruples: Vec<UnimodularQuadruple<Q>>,
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_0000 + tag)
}

/// Ring axioms on exact point distributions, checked against schoolbook convolution.
fn ring_axioms(corpus: &mut Corpus) -> Outcome {
    let mut rng = rng(1);
    let id: Distribution<Q> = Distribution::identity();
    let mut failures = Vec::new();
    for i in 0..1000 {
        let a = distribution(&mut rng, 8, 3, 100);
        let b = distribution(&mut rng, 8, 3, 100);
        let c = distribution(&mut rng, 8, 3, 100);
        let ab = &a * &b;
        let checks = [
            ("associativity", &ab * &c == &a * &(&b * &c)),
            ("commutativity", ab == &b * &a),
            ("distributivity", &a * &(&b + &c) == &ab + &(&a * &c)),
            ("identity", &id * &a == a && &a * &id == a),
            ("oracle product", table(&ab) == naive_convolve(&table(&a), &table(&b))),
            ("oracle sum", table(&(&a + &b)) == add_tables(&table(&a), &table(&b))),
        ];
        for (name, ok) in checks {
            if !ok {
                failures.push(format!("triple {i}: {name}"));
            }
        }
        if i < 200 {
            corpus.exact.push(a);
        }
    }
    Outcome::new(failures.is_empty(), format!("1000 triples, failures {:?}", failures.first()))
}

/// `Φ` on random Laurent pairs with exponents in `[−12, 12]`.
fn phi_homomorphism(_: &mut Corpus) -> Outcome {
    let mut rng = rng(2);
    let mut failures = Vec::new();
    for i in 0..1000 {
        let n = rng.gen_range(1..=8u64);
        let p = laurent(&mut rng, -12, 12, 100);
        let q = laurent(&mut rng, -12, 12, 100);
        let (dp, dq) = (phi(&p, n).to_distribution(), phi(&q, n).to_distribution());
        let checks = [
            ("product", phi(&(&p * &q), n).to_distribution() == &dp * &dq),
            ("sum", phi(&(&p + &q), n).to_distribution() == &dp + &dq),
            ("round trip", phi_inverse(&phi(&p, n)) == p),
            ("oracle product", table(&phi(&(&p * &q), n).to_distribution()) == naive_convolve(&table(&dp), &table(&dq))),
            ("oracle image", {
                let t = table(&dp);
                t.len() == p.len()
                    && p.terms().all(|(k, c)| t.get(&(RationalPoint::new(k, n as i64).unwrap(), 0)) == Some(c))
            }),
        ];
        for (name, ok) in checks {
            if !ok {
                failures.push(format!("pair {i}: {name}"));
            }
        }
    }
    Outcome::new(failures.is_empty(), format!("1000 pairs, failures {:?}", failures.first()))
}

fn hull(t: &Table) -> Option<(RationalPoint, RationalPoint)> {
    let lo = t.keys().map(|k| k.0).min()?;
    let hi = t.keys().map(|k| k.0).max()?;
    Some((lo, hi))
}

/// Highest order at the leftmost location.
fn leading_order(t: &Table) -> Option<u32> {
    let (lo, _) = hull(t)?;
    t.keys().filter(|k| k.0 == lo).map(|k| k.1).max()
}

/// Non-invertibility certified by support widths or leftmost orders.
fn obstruction(d: &Table, s: &Table, product: &Table) -> Result<(), String> {
    let (dl, dh) = hull(d).ok_or("zero D")?;
    let (sl, sh) = hull(s).ok_or("zero S")?;
    let (pl, ph) = hull(product).ok_or("zero product")?;
    if ph - pl != (dh - dl) + (sh - sl) {
        return Err("support widths are not additive".into());
    }
    let order = leading_order(product).unwrap();
    if order != leading_order(d).unwrap() + leading_order(s).unwrap() {
        return Err("leftmost orders are not additive".into());
    }
    if dh == dl && order == 0 {
        return Err("single-point D without an order obstruction".into());
    }
    Ok(())
}

fn invertibility(_: &mut Corpus) -> Outcome {
    let mut rng = rng(3);
    let id: Distribution<Q> = Distribution::identity();
    let mut failures = Vec::new();
    let (mut invertible, mut rejected, mut candidates) = (0, 0, 0);
    for i in 0..120 {
        let d = match i % 4 {
            0 => Distribution::term(nonzero_gauss(&mut rng, 100), point(&mut rng, 100), 0),
            1 => Distribution::term(nonzero_gauss(&mut rng, 100), point(&mut rng, 100), rng.gen_range(1..=3)),
            2 => {
                let a = point(&mut rng, 100);
                Distribution::canonicalize(
                    (0..rng.gen_range(2..=4)).map(|r| PointTerm::new(nonzero_gauss(&mut rng, 100), a, r)),
                )
            }
            _ => distribution(&mut rng, 8, 3, 100),
        };
        if d.is_zero() {
            continue;
        }
        let single = d.len() == 1 && d.terms()[0].order == 0;
        match d.invert() {
            Inverse::Invertible(inv) => {
                let t = &d.terms()[0];
                let expected = Distribution::term(t.coeff.inv().unwrap(), -t.location, 0);
                if !single || &d * &inv != id || inv != expected {
                    failures.push(format!("D {i}: wrong inverse"));
                }
                invertible += 1;
            }
            Inverse::NotInvertible => {
                if single {
                    failures.push(format!("D {i}: point mass rejected"));
                    continue;
                }
                rejected += 1;
                let dt = table(&d);
                let lead = &d.terms()[0];
                for j in 0..200 {
                    let s = if j == 0 {
                        Distribution::term(lead.coeff.inv().unwrap(), -lead.location, 0)
                    } else {
                        loop {
                            let s = distribution(&mut rng, 8, 3, 100);
                            if !s.is_zero() {
                                break s;
                            }
                        }
                    };
                    let product = &d * &s;
                    candidates += 1;
                    if product == id {
                        failures.push(format!("D {i}: candidate {j} inverts"));
                    }
                    if let Err(e) = obstruction(&dt, &table(&s), &table(&product)) {
                        failures.push(format!("D {i}, candidate {j}: {e}"));
                    }
                }
            }
        }
    }
    Outcome::new(
        failures.is_empty() && invertible > 0 && rejected > 0,
        format!("{invertible} invertible, {rejected} rejected, {candidates} candidates, failures {:?}", failures.first()),
    )
}

struct CombCase {
    n: u64,
    l: i64,
    k: u32,
    t: DiracComb<Q>,
    s: DiracComb<Q>,
}

fn random_poly(rng: &mut ChaCha8Rng, degree: i64) -> LaurentPoly<Q> {
    let mut p = LaurentPoly::from_terms((0..=degree).filter_map(|e| {
        rng.gen_bool(0.8).then(|| (e, Q::ratio(rng.gen_range(-100..=100), rng.gen_range(1..=10))))
    }));
    if p.coeff(degree).is_zero() {
        p.add_term(degree, Q::ratio(rng.gen_range(1..=100), rng.gen_range(1..=10)));
    }
    p
}

/// Random comb pairs; every fourth shares a linear factor.
fn comb_cases(seed: u64, count: usize, max_n: u64, max_l: impl Fn(u64) -> i64) -> Vec<CombCase> {
    let mut rng = rng(seed);
    let betas = [Q::one(), -Q::one(), Q::ratio(1, 2), Q::zero(), Q::ratio(2, 1)];
    (0..count)
        .map(|i| {
            let n = rng.gen_range(1..=max_n);
            let l = rng.gen_range(1..=max_l(n));
            let k = rng.gen_range(1..=6);
            let (p, q) = if i % 4 == 0 {
                let beta = betas[rng.gen_range(0..betas.len())].clone();
                let f = LaurentPoly::from_terms([(0, -beta), (1, Q::one())]);
                (&f * &random_poly(&mut rng, 2 * l - 1), &f * &random_poly(&mut rng, 2 * l - 1))
            } else {
                (random_poly(&mut rng, 2 * l), random_poly(&mut rng, 2 * l))
            };
            CombCase {
                n,
                l,
                k,
                t: phi(&p.shift(-l), n),
                s: phi(&q.shift(-l), n),
            }
        })
        .collect()
}

fn sampled_sup(psi: &TestFunction, lo: f64, hi: f64, extra: &[f64]) -> f64 {
    let samples = ((hi - lo) * SUP_SAMPLES_PER_UNIT).ceil().max(1.0) as usize;
    (0..=samples)
        .map(|i| lo + (hi - lo) * i as f64 / samples as f64)
        .chain(extra.iter().copied())
        .map(|x| psi.value(x).norm())
        .fold(0.0, f64::max)
}

/// `|⟨T − T_k, ψ⟩|` from the coefficient differences on the grid.
fn comb_weak_error(a: &DiracComb<Q>, b: &DiracComb<Q>, psi: &TestFunction) -> f64 {
    let (ma, mb) = (comb_map(a), comb_map(b));
    let n = a.denominator() as f64;
    let keys: std::collections::BTreeSet<i64> = ma.keys().chain(mb.keys()).copied().collect();
    keys.into_iter()
        .map(|k| {
            let d = ma.get(&k).cloned().unwrap_or_else(Q::zero) - mb.get(&k).cloned().unwrap_or_else(Q::zero);
            d.to_c64() * psi.value(k as f64 / n)
        })
        .sum::<Complex64>()
        .norm()
}

fn unimodular_pipeline(corpus: &mut Corpus) -> Outcome {
    let battery = standard_battery();
    let cases = comb_cases(4, 100, 8, |_| 10);
    let mut failures = Vec::new();
    let mut float_ok = 0;
    let mut worst_residual: f64 = 0.0;
    let mut worst_weak_ratio: f64 = 0.0;
    for (i, case) in cases.iter().enumerate() {
        let float = (
            DiracComb::from_coeffs(case.n, case.t.iter().map(|(j, c)| (j, c.to_c64()))),
            DiracComb::from_coeffs(case.n, case.s.iter().map(|(j, c)| (j, c.to_c64()))),
        );
        if let Ok(qf) = unimodular_approx_pair(&float.0, &float.1, case.k, &PipelineOptions::default()) {
            if comb_bezout_residual(&qf.t, &qf.s, &qf.u, &qf.v) < RESIDUAL_TOL {
                float_ok += 1;
            }
        }
        let quad = match unimodular_approx_pair(&case.t, &case.s, case.k, &PipelineOptions::default()) {
            Ok(q) => q,
            Err(e) => {
                failures.push(format!("case {i}: {e}"));
                continue;
            }
        };
        let eps = 1.0 / ((1u64 << case.k) as f64 * 2.0 * case.l as f64);
        let (dt, lt) = comb_distance(&case.t, &quad.t);
        let (ds, ls) = comb_distance(&case.s, &quad.s);
        if !(dt < eps && ds < eps) {
            failures.push(format!("case {i}: distance {dt:e}, {ds:e} vs {eps:e}"));
        }
        if lt.max(ls) > 0.0 && !(lt.max(ls) <= 0.5f64.powi(case.k as i32)) {
            failures.push(format!("case {i}: l1 distance {:e}", lt.max(ls)));
        }
        let residual = comb_bezout_residual(&quad.t, &quad.s, &quad.u, &quad.v);
        worst_residual = worst_residual.max(residual);
        if !(residual < RESIDUAL_TOL) {
            failures.push(format!("case {i}: residual {residual:e}"));
        }
        let half = case.l as f64 / case.n as f64;
        let grid: Vec<f64> = (-case.l..=case.l).map(|j| j as f64 / case.n as f64).collect();
        let scale = 0.5f64.powi(case.k as i32);
        for (b, psi) in battery.iter().enumerate() {
            let bound = scale * sampled_sup(psi, -half, half, &grid);
            for (orig, approx) in [(&case.t, &quad.t), (&case.s, &quad.s)] {
                let err = comb_weak_error(orig, approx, psi);
                if bound > 0.0 {
                    worst_weak_ratio = worst_weak_ratio.max(err / bound);
                }
                if !(err <= bound) {
                    failures.push(format!("case {i}, psi {b}: weak error {err:e} > {bound:e}"));
                }
            }
        }
        corpus.quadruples.push(quad);
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "exact mode, 100 pairs, worst residual {worst_residual:e}, worst weak ratio {worst_weak_ratio:.3}; \
             float mode reaches the gate on {float_ok}/100; failures {:?}",
            failures.first()
        ),
    )
}

fn bump_oracle(x: f64, order: u32) -> f64 {
    match order {
        0 => raw_bump(x) / BUMP_MASS,
        1 if x.abs() < 1.0 => raw_bump(x) * (-2.0 * x / (1.0 - x * x).powi(2)) / BUMP_MASS,
        _ => 0.0,
    }
}

fn mollify_convergence(corpus: &mut Corpus) -> Outcome {
    let one = Complex64::new(1.0, 0.0);
    let t: Distribution<Complex64> = &Distribution::term(one, RationalPoint::new(1, 2).unwrap(), 1)
        + &Distribution::term(3.0 * one, RationalPoint::new(-1, 4).unwrap(), 0);
    let spec = BumpSpec::default();
    let battery = standard_battery();
    let k = 1;
    let mut notes = Vec::new();
    let mut pass = true;

    let mass = simpson(&raw_bump, -1.0, 1.0, 1e-12);
    if (mass - BUMP_MASS).abs() > 1e-10 {
        pass = false;
        notes.push(format!("bump mass {mass} vs {BUMP_MASS}"));
    }

    let m = minimal_index(&t, k, &spec).unwrap();
    let ns = [8u64, 16, 32, 64, 128];
    let mut riemann = Vec::new();
    for &n in &ns {
        let step = sample_step(&t, k, m, n, &spec, &battery).unwrap();
        riemann.push(step.riemann_error());
        corpus.float.push(step.comb.to_distribution());
    }
    let slope = loglog_slope(&ns.map(|n| n as f64), &riemann);
    if !(slope <= SLOPE_MAX) {
        pass = false;
    }
    notes.push(format!("m = {m}, sampling-error slope {slope:.2} over n = 8..128"));

    // closed-form check of one comb and of one pairing
    let f = mollify(&t, m, &spec).unwrap();
    let n = 32;
    let comb = riemann_comb(&f, k, n).unwrap();
    let mf = m as f64;
    let f_oracle = |x: f64| mf * mf * bump_oracle(mf * (x - 0.5), 1) + 3.0 * mf * bump_oracle(mf * (x + 0.25), 0);
    let mut comb_err: f64 = 0.0;
    for l in 0..n as i64 {
        let x = -(k as f64) + 2.0 * k as f64 * l as f64 / n as f64;
        let expected = 2.0 * k as f64 / n as f64 * f_oracle(x);
        comb_err = comb_err.max((comb.coeff(-(k * n as i64) + 2 * k * l) - Complex64::new(expected, 0.0)).norm());
    }
    let psi = &battery[0];
    let lo = -0.25 - 1.0 / mf;
    let hi = 0.5 + 1.0 / mf;
    let quad = simpson(&|x| f_oracle(x) * psi.value(x).re, lo, hi, 1e-12);
    let pair_err = (f.pair(psi).unwrap() - Complex64::new(quad, 0.0)).norm();
    if comb_err > 1e-12 || pair_err > 1e-8 {
        pass = false;
    }
    notes.push(format!("comb oracle {comb_err:.1e}, pairing oracle {pair_err:.1e}"));

    let schedule = default_schedule(m, k, 4);
    let totals: Vec<f64> = schedule
        .iter()
        .map(|&(m, n)| sample_step(&t, k, m, n, &spec, &battery).unwrap().weak_error())
        .collect();
    let monotone = totals.windows(2).all(|w| w[1] < w[0]);
    if !monotone {
        pass = false;
    }
    notes.push(format!("totals along {schedule:?}: {}", fmt_list(&totals)));
    Outcome::new(pass, notes.join("; "))
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(" > ")
}

fn witness() -> Distribution<Q> {
    let c = Q::new(Q::zero().re, num_rational::BigRational::new((-1).into(), 2.into()));
    // (δ_{−1} − δ_1)/(2i) = −i/2 δ_{−1} + i/2 δ_1
    &Distribution::term(c.clone(), RationalPoint::integer(-1), 0) + &Distribution::term(-c, RationalPoint::integer(1), 0)
}

fn sine_witness(corpus: &mut Corpus) -> Outcome {
    let t = witness();
    let mut rng = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let z = Complex64::from_polar(2.0 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
        let expected = (2.0 * std::f64::consts::PI * z).sin();
        worst = worst.max((fl_eval(&t, z) - expected).norm());
    }
    let mut pass = worst <= WITNESS_TOL;
    let mut notes = vec![format!("max |T^ - sin 2 pi z| = {worst:.1e}")];

    let disk = GridSpec::unit_disk(201);
    let global = detect_zero(&t, &disk);
    let zero_dist = |z: Complex64| ((2.0 * z.re).round() / 2.0 - z.re).hypot(z.im);
    let global_ok = global.refined.value < WITNESS_ZERO_TOL && zero_dist(global.refined.argmin()) < disk.spacing();
    pass &= global_ok;
    notes.push(format!(
        "unit disk min {:.1e} at {:.4}",
        global.refined.value,
        global.refined.argmin()
    ));
    for c in [-0.5, 0.5] {
        let window = GridSpec::new(Complex64::new(c, 0.0), 0.25, 201).unwrap();
        let found = detect_zero(&t, &window);
        let near = (found.refined.argmin() - c).norm() < window.spacing();
        pass &= found.refined.value < WITNESS_ZERO_TOL && near && found.zero_suspected;
        notes.push(format!("min near {c}: {:.1e} at {:.4}", found.refined.value, found.refined.argmin()));
    }
    let not_invertible = t.invert() == Inverse::NotInvertible;
    pass &= not_invertible;
    notes.push(format!("invert: {}", if not_invertible { "NotInvertible" } else { "invertible" }));
    corpus.exact.push(t);
    Outcome::new(pass, notes.join("; "))
}

/// f64 residual `max |T^ U^ + S^ V^ − 1|` from the direct transform, with its rounding floor.
fn float_transform_residual(q: &UnimodularQuadruple<Q>, points: &[Complex64]) -> (f64, f64) {
    let parts = [&q.t, &q.s, &q.u, &q.v].map(|c| c.to_distribution().to_float());
    let growth = |d: &Distribution<Complex64>| -> f64 {
        d.terms()
            .iter()
            .map(|t| t.coeff.norm() * (2.0 * std::f64::consts::PI * t.location.to_f64().abs()).exp())
            .sum()
    };
    let floor = 16.0 * f64::EPSILON * (growth(&parts[0]) * growth(&parts[2]) + growth(&parts[1]) * growth(&parts[3]));
    let worst = points
        .iter()
        .map(|&z| {
            let [t, s, u, v] = parts.each_ref().map(|d| direct_transform(d, z));
            (t * u + s * v - 1.0).norm()
        })
        .fold(0.0, f64::max);
    (worst, floor)
}

/// `Σ c ζ^r w^{ℓ}` in exact arithmetic, for a comb on the `1/n` grid.
fn exact_substitution(c: &DiracComb<Q>, zeta: &Q, w: &Q, w_inv: &Q) -> Q {
    let mut total = Q::zero();
    let _ = zeta; // combs carry no derivatives
    for (l, coeff) in c.iter() {
        let base = if l < 0 { w_inv } else { w };
        let mut p = Q::one();
        for _ in 0..l.unsigned_abs() {
            p = p * base.clone();
        }
        total = total + coeff.clone() * p;
    }
    total
}

fn transform_space(corpus: &mut Corpus) -> Outcome {
    let grid = GridSpec::unit_disk(TRANSFORM_GRID);
    let mut rng = rng(7);
    let mut failures = Vec::new();
    let mut small = Vec::new();
    for (i, case) in comb_cases(7, 40, 8, |n| (n as i64 / 2).max(1)).iter().enumerate() {
        match unimodular_approx_pair(&case.t, &case.s, case.k, &PipelineOptions::default()) {
            Ok(q) => small.push(q),
            Err(e) => failures.push(format!("small-support case {i}: {e}")),
        }
    }
    corpus.quadruples.extend(small);
    let (mut slowest, mut worst, mut worst_float_ratio) = (Duration::ZERO, 0.0f64, 0.0f64);
    let mut float_resolvable = 0;
    for (i, q) in corpus.quadruples.iter().enumerate() {
        let start = Instant::now();
        let r = transform_bezout_residual(
            &q.t.to_distribution(),
            &q.s.to_distribution(),
            &q.u.to_distribution(),
            &q.v.to_distribution(),
            &grid,
        );
        slowest = slowest.max(start.elapsed());
        worst = worst.max(r);
        if !(r <= TRANSFORM_TOL) {
            failures.push(format!("quadruple {i}: residual {r:e}"));
        }
        let points: Vec<Complex64> = (0..8)
            .map(|_| Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let (fr, floor) = float_transform_residual(q, &points);
        worst_float_ratio = worst_float_ratio.max(fr / floor);
        if floor <= TRANSFORM_TOL {
            float_resolvable += 1;
        }
        if fr > floor {
            failures.push(format!("quadruple {i}: f64 residual {fr:e} above its floor {floor:e}"));
        }
        let n = q.t.denominator() as f64;
        for &z in points.iter().take(2) {
            let zeta = Complex64::new(0.0, 2.0 * std::f64::consts::PI) * z;
            let w = Q::from_c64((-zeta / n).exp());
            let w_inv = w.inv().unwrap();
            let zq = Q::from_c64(zeta);
            let [t, s, u, v] = [&q.t, &q.s, &q.u, &q.v].map(|c| exact_substitution(c, &zq, &w, &w_inv));
            if t * u + s * v != Q::one() {
                failures.push(format!("quadruple {i}: exact substitution is not 1"));
            }
        }
    }
    Outcome::new(
        failures.is_empty() && slowest < Duration::from_secs(10),
        format!(
            "{} quadruples on the resolution-{TRANSFORM_GRID} unit disk, worst {worst:.1e}, slowest {slowest:.2?}; \
             plain f64 products resolve {float_resolvable} of them and stay within their rounding floor \
             (worst ratio {worst_float_ratio:.2}); failures {:?}",
            corpus.quadruples.len(),
            failures.first()
        ),
    )
}

fn certificate_grid() -> Vec<Complex64> {
    (0..41)
        .flat_map(|i| (0..41).map(move |j| Complex64::new(-4.0 + 0.2 * i as f64, -4.0 + 0.2 * j as f64)))
        .collect()
}

fn check_certificate<C: Scalar>(d: &Distribution<C>, grid: &[Complex64]) -> Result<(), String> {
    let cert = pw_constants(d).map_err(|e| e.to_string())?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let c: f64 = d.terms().iter().map(|t| t.coeff.modulus() * two_pi.powi(t.order as i32)).sum();
    let m = d.max_order();
    let r = d.terms().iter().map(|t| two_pi * t.location.to_f64().abs()).fold(0.0, f64::max);
    if (cert.c - c).abs() > 1e-12 * c || cert.m != m || (cert.r - r).abs() > 1e-12 * r.max(1.0) {
        return Err(format!("constants ({}, {}, {}) vs ({c}, {m}, {r})", cert.c, cert.m, cert.r));
    }
    if cert.violations != 0 || !cert.is_valid() {
        return Err(format!("{} reported violations", cert.violations));
    }
    let bad = grid
        .iter()
        .filter(|&&z| {
            let a = z.norm();
            direct_transform(d, z).norm() > c * (1.0 + a).powi(m as i32) * (r * a).exp() * (1.0 + PW_SLACK)
        })
        .count();
    if bad > 0 {
        return Err(format!("{bad} grid points above the bound"));
    }
    Ok(())
}

fn certificates(corpus: &mut Corpus) -> Outcome {
    let grid = certificate_grid();
    let mut failures = Vec::new();
    let mut count = 0;
    let nonzero = |d: &&Distribution<Q>| !d.is_zero();
    let exact: Vec<&Distribution<Q>> = corpus.exact.iter().filter(nonzero).collect();
    let combs: Vec<Distribution<Q>> = corpus
        .quadruples
        .iter()
        .flat_map(|q| [&q.t, &q.s, &q.u, &q.v].map(|c| c.to_distribution()))
        .filter(|d| !d.is_zero())
        .collect();
    for d in exact.into_iter().chain(&combs) {
        count += 1;
        if let Err(e) = check_certificate(d, &grid) {
            failures.push(e);
        }
    }
    for d in corpus.float.iter().filter(|d| !d.is_zero()) {
        count += 1;
        if let Err(e) = check_certificate(d, &grid) {
            failures.push(e);
        }
    }
    Outcome::new(
        failures.is_empty() && count > 0,
        format!("{count} certificates on the radius-4, resolution-41 grid, {} failing {:?}", failures.len(), failures.first()),
    )
}

fn main() {
    type Criterion = fn(&mut Corpus) -> Outcome;
    let criteria: [(&str, Criterion, u64); 8] = [
        ("ring axioms", ring_axioms, 10),
        ("phi homomorphism", phi_homomorphism, 10),
        ("invertibility", invertibility, 5),
        ("unimodular approximation", unimodular_pipeline, 60),
        ("mollify and sample", mollify_convergence, 30),
        ("sine witness", sine_witness, 5),
        ("transform-space identity", transform_space, 0),
        ("growth certificates", certificates, 0),
    ];
    let mut corpus = Corpus::default();
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = run(&mut corpus);
        let elapsed = start.elapsed();
        let in_time = limit == 0 || elapsed < Duration::from_secs(limit);
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget = if limit == 0 { String::new() } else { format!(" / {limit} s") };
        println!(
            "criterion {}: {} {name} [{elapsed:.2?}{budget}] {}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
