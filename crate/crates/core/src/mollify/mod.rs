//! Mollification of point distributions and Riemann-sum sampling into combs.
//!
//! `f_m = T ∗ φ_m` with `φ_m(x) = m·φ(mx)` is evaluated in closed form as
//! `Σ_j c_j m^{r_j+1} φ^{(r_j)}(m(x − a_j))`. Sampling `f_m` at the left
//! endpoints `−k + 2kℓ/n` gives a comb on the `1/n` grid.

mod bump;
mod testfn;

use std::io::Write;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::Serialize;

pub use bump::{bump_eval, unit_bump, BumpSpec, BUMP_MASS, MAX_DERIVATIVE_ORDER};
pub use testfn::{standard_battery, TestFamily, TestFunction};

use crate::distr::{DiracComb, Distribution, SupportHull};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const QUAD_PANELS: usize = 16;
const QUAD_NODES: usize = 24;

fn legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(QUAD_NODES).expect("degree >= 2"))
}

/// Composite Gauss–Legendre on `[lo, hi]` for a complex integrand.
fn integrate(lo: f64, hi: f64, mut f: impl FnMut(f64) -> Result<Complex64>) -> Result<Complex64> {
    let rule = legendre().as_node_weight_pairs();
    let h = (hi - lo) / QUAD_PANELS as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..QUAD_PANELS {
        let a = lo + h * p as f64;
        let mid = a + 0.5 * h;
        for &(x, w) in rule {
            total += f(mid + 0.5 * h * x)? * w;
        }
    }
    Ok(total * (0.5 * h))
}

/// `T ∗ φ_m` for a point distribution `T`.
#[derive(Clone, Debug)]
pub struct MollifiedFunction {
    source: Distribution<Complex64>,
    m: u64,
    spec: BumpSpec,
}

impl MollifiedFunction {
    pub fn source(&self) -> &Distribution<Complex64> {
        &self.source
    }

    pub fn index(&self) -> u64 {
        self.m
    }

    pub fn spec(&self) -> &BumpSpec {
        &self.spec
    }

    /// `a/m` as an exact rational.
    pub fn radius(&self) -> Rational64 {
        self.spec.half_width() / Rational64::from_integer(self.m as i64)
    }

    /// `support_hull(T) + [−a/m, a/m]`; `None` when `T = 0`.
    pub fn support(&self) -> Option<(Rational64, Rational64)> {
        let (lo, hi) = self.source.support_hull().bounds()?;
        let r = self.radius();
        Some((rat(lo.numer(), lo.denom()) - r, rat(hi.numer(), hi.denom()) + r))
    }

    /// `f_m^{(s)}(x)`.
    pub fn derivative(&self, x: f64, s: u32) -> Result<Complex64> {
        let m = self.m as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for t in self.source.terms() {
            let order = t.order + s;
            let v = m.powi(order as i32 + 1) * self.spec.eval(m * (x - t.location.to_f64()), order)?;
            total += t.coeff * v;
        }
        Ok(total)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let m = self.m as f64;
        self.source
            .terms()
            .iter()
            .map(|t| {
                let v = m.powi(t.order as i32 + 1)
                    * self
                        .spec
                        .eval(m * (x - t.location.to_f64()), t.order)
                        .unwrap_or(f64::NAN);
                t.coeff * v
            })
            .sum()
    }

    /// `⟨f_m, ψ⟩ = ∫ f_m ψ`, by Gauss–Legendre on each term's support.
    pub fn pair(&self, psi: &TestFunction) -> Result<Complex64> {
        let a = self.spec.half_width_f64();
        let m = self.m as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for t in self.source.terms() {
            let loc = t.location.to_f64();
            // x = a_j + y/m turns the term into m^r ∫ φ^{(r)}(y) ψ(a_j + y/m) dy
            let part = integrate(-a, a, |y| {
                Ok(psi.value(loc + y / m) * self.spec.eval(y, t.order)?)
            })?;
            total += t.coeff * part * m.powi(t.order as i32);
        }
        Ok(total)
    }
}

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Smallest `m` with `support_hull(T) + [−a/m, a/m] ⊆ [−k, k]`.
pub fn minimal_index<C: Scalar>(t: &Distribution<C>, k: i64, spec: &BumpSpec) -> Result<u64> {
    let Some((lo, hi)) = t.support_hull().bounds() else {
        return Ok(1);
    };
    let kk = Rational64::from_integer(k);
    let gap = (kk - rat(hi.numer(), hi.denom())).min(rat(lo.numer(), lo.denom()) + kk);
    if gap <= Rational64::from_integer(0) {
        return Err(Error::SupportNotInside {
            lo: lo.to_string(),
            hi: hi.to_string(),
            k,
        });
    }
    let m = (spec.half_width() / gap).ceil().to_integer().max(1);
    Ok(m as u64)
}

pub fn mollify<C: Scalar>(t: &Distribution<C>, m: u64, spec: &BumpSpec) -> Result<MollifiedFunction> {
    if m == 0 {
        return Err(Error::InvalidArgument("mollifier index must be positive".into()));
    }
    Ok(MollifiedFunction {
        source: t.to_float(),
        m,
        spec: *spec,
    })
}

/// `T_{m,n} = Σ_{ℓ=0}^{n−1} (2k/n)·f_m(−k + 2kℓ/n)·δ_{−k+2kℓ/n}`.
pub fn riemann_comb(f: &MollifiedFunction, k: i64, n: u64) -> Result<DiracComb<Complex64>> {
    if k < 1 || n < 1 {
        return Err(Error::InvalidArgument(format!("need k >= 1 and n >= 1, got k={k} n={n}")));
    }
    if let Some((lo, hi)) = f.support() {
        let kk = Rational64::from_integer(k);
        if lo < -kk || hi > kk {
            return Err(Error::SupportNotInside {
                lo: lo.to_string(),
                hi: hi.to_string(),
                k,
            });
        }
    }
    let ni = n as i64;
    let weight = 2.0 * k as f64 / n as f64;
    let mut comb = DiracComb::new(n);
    for l in 0..ni {
        let index = -k * ni + 2 * k * l;
        let x = index as f64 / n as f64;
        let v = f.eval(x);
        if v != Complex64::new(0.0, 0.0) {
            comb.add_at(index, v * weight);
        }
    }
    Ok(comb)
}

/// Three error components of one schedule step against one test function.
#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticRow {
    pub m: u64,
    pub n: u64,
    pub battery_index: usize,
    /// `|⟨T − T_{m,n}, ψ⟩|`
    pub weak_error: f64,
    /// `|⟨T − f_m, ψ⟩|`
    pub mollify_error: f64,
    /// `|⟨f_m − T_{m,n}, ψ⟩|`
    pub riemann_error: f64,
}

#[derive(Clone, Debug)]
pub struct SampleStep {
    pub m: u64,
    pub n: u64,
    pub comb: DiracComb<Complex64>,
    pub rows: Vec<DiagnosticRow>,
}

impl SampleStep {
    /// `max_ψ |⟨T − T_{m,n}, ψ⟩|`.
    pub fn weak_error(&self) -> f64 {
        self.rows.iter().map(|r| r.weak_error).fold(0.0, f64::max)
    }

    pub fn mollify_error(&self) -> f64 {
        self.rows.iter().map(|r| r.mollify_error).fold(0.0, f64::max)
    }

    pub fn riemann_error(&self) -> f64 {
        self.rows.iter().map(|r| r.riemann_error).fold(0.0, f64::max)
    }
}

/// `m_j = M·2^j`, `n_j = 8·k·m_j·2^j` for `j < steps`.
pub fn default_schedule(min_index: u64, k: i64, steps: usize) -> Vec<(u64, u64)> {
    (0..steps)
        .map(|j| {
            let m = min_index << j;
            (m, 8 * k as u64 * m << j)
        })
        .collect()
}

/// Diagnose `T_{m,n}` against `T` for every test function in the battery.
pub fn sample_step<C: Scalar>(
    t: &Distribution<C>,
    k: i64,
    m: u64,
    n: u64,
    spec: &BumpSpec,
    battery: &[TestFunction],
) -> Result<SampleStep> {
    if battery.is_empty() {
        return Err(Error::EmptyBattery);
    }
    let tf = t.to_float();
    let f = mollify(&tf, m, spec)?;
    let comb = riemann_comb(&f, k, n)?;
    let cd = comb.to_distribution();
    let mut rows = Vec::with_capacity(battery.len());
    for (i, psi) in battery.iter().enumerate() {
        let exact = tf.pair(psi)?;
        let smooth = f.pair(psi)?;
        let sampled = cd.pair(psi)?;
        rows.push(DiagnosticRow {
            m,
            n,
            battery_index: i,
            weak_error: (exact - sampled).norm(),
            mollify_error: (exact - smooth).norm(),
            riemann_error: (smooth - sampled).norm(),
        });
    }
    Ok(SampleStep { m, n, comb, rows })
}

/// Run a mollify-then-sample schedule for `T` with `supp T ⊂ (−k, k)`.
pub fn comb_sequence<C: Scalar>(
    t: &Distribution<C>,
    k: i64,
    schedule: &[(u64, u64)],
    spec: &BumpSpec,
    battery: &[TestFunction],
) -> Result<Vec<SampleStep>> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!("k must be >= 1, got {k}")));
    }
    let min_m = minimal_index(t, k, spec)?;
    if let SupportHull::Interval { lo, hi } = t.support_hull() {
        let kk = k.to_f64().unwrap_or(f64::NAN);
        if !(lo.to_f64() > -kk && hi.to_f64() < kk) {
            return Err(Error::SupportNotInside {
                lo: lo.to_string(),
                hi: hi.to_string(),
                k,
            });
        }
    }
    schedule
        .iter()
        .map(|&(m, n)| {
            if m < min_m {
                return Err(Error::InvalidArgument(format!(
                    "mollifier index {m} is below the support bound M = {min_m}"
                )));
            }
            sample_step(t, k, m, n, spec, battery)
        })
        .collect()
}

/// Write diagnostics as CSV with a header row.
pub fn write_diagnostics_csv<W: Write>(mut w: W, steps: &[SampleStep]) -> std::io::Result<()> {
    writeln!(w, "m,n,battery_index,weak_error,mollify_error,riemann_error")?;
    for step in steps {
        for r in &step.rows {
            writeln!(
                w,
                "{},{},{},{:e},{:e},{:e}",
                r.m, r.n, r.battery_index, r.weak_error, r.mollify_error, r.riemann_error
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distr::RationalPoint;

    fn pt(n: i64, d: i64) -> RationalPoint {
        RationalPoint::new(n, d).unwrap()
    }

    #[test]
    fn identity_mollifies_to_the_bump() {
        let spec = BumpSpec::default();
        let d: Distribution<Complex64> = Distribution::identity();
        let f = mollify(&d, 4, &spec).unwrap();
        for &x in &[-0.2, 0.0, 0.1, 0.3] {
            let expected = 4.0 * spec.eval(4.0 * x, 0).unwrap();
            assert!((f.eval(x).re - expected).abs() < 1e-14);
        }
        let mass = f.pair(&TestFunction::constant(1.0)).unwrap();
        assert!((mass.re - 1.0).abs() < 1e-10, "{mass}");
    }

    #[test]
    fn derivative_mollifies_to_derivative() {
        let spec = BumpSpec::default();
        let d: Distribution<Complex64> =
            Distribution::term(Complex64::new(1.0, 0.0), RationalPoint::ZERO, 1);
        let f = mollify(&d, 2, &spec).unwrap();
        let g = mollify(&Distribution::<Complex64>::identity(), 2, &spec).unwrap();
        let h = 1e-6;
        for &x in &[-0.3, 0.05, 0.2] {
            let fd = (g.eval(x + h) - g.eval(x - h)) / (2.0 * h);
            assert!((f.eval(x) - fd).norm() < 1e-6 * (1.0 + fd.norm()));
        }
    }

    #[test]
    fn support_law() {
        let spec = BumpSpec::default();
        let d: Distribution<Complex64> =
            Distribution::term(Complex64::new(3.0, 0.0), pt(-1, 4), 0);
        let f = mollify(&d, 8, &spec).unwrap();
        let (lo, hi) = f.support().unwrap();
        assert_eq!(lo, Rational64::new(-1, 4) - Rational64::new(1, 8));
        assert_eq!(hi, Rational64::new(-1, 4) + Rational64::new(1, 8));
        assert_eq!(f.eval(-0.25 + 0.125).norm(), 0.0);
        assert!(f.eval(-0.25 + 0.12).norm() > 0.0);
    }

    #[test]
    fn minimal_index_examples() {
        let spec = BumpSpec::default();
        let d: Distribution<Complex64> = &Distribution::term(Complex64::new(1.0, 0.0), pt(1, 2), 1)
            + &Distribution::term(Complex64::new(3.0, 0.0), pt(-1, 4), 0);
        assert_eq!(minimal_index(&d, 1, &spec).unwrap(), 2);
        assert!(minimal_index(&Distribution::<Complex64>::delta(pt(1, 1)), 1, &spec).is_err());
    }

    #[test]
    fn single_panel_hits_the_boundary() {
        let spec = BumpSpec::default();
        let f = mollify(&Distribution::<Complex64>::identity(), 1, &spec).unwrap();
        let c = riemann_comb(&f, 1, 1).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn riemann_pairing_is_the_left_sum() {
        let spec = BumpSpec::default();
        let f = mollify(&Distribution::<Complex64>::identity(), 2, &spec).unwrap();
        let (k, n) = (1, 16);
        let comb = riemann_comb(&f, k, n).unwrap();
        let psi = TestFunction::trig_bump(3.0, 0.2, 0.1, 2.0);
        let paired = comb.to_distribution().pair(&psi).unwrap();
        let h = 2.0 / n as f64;
        let left: Complex64 = (0..n)
            .map(|l| {
                let x = -1.0 + h * l as f64;
                f.eval(x) * psi.value(x) * h
            })
            .sum();
        assert!((paired - left).norm() < 1e-14);
        assert_eq!(comb.denominator(), n);
    }

    #[test]
    fn rejects_support_violation() {
        let spec = BumpSpec::default();
        let d: Distribution<Complex64> = Distribution::delta(pt(1, 2));
        let f = mollify(&d, 1, &spec).unwrap();
        assert!(matches!(riemann_comb(&f, 1, 8), Err(Error::SupportNotInside { .. })));
    }

    #[test]
    fn empty_schedule() {
        let spec = BumpSpec::default();
        let d: Distribution<Complex64> = Distribution::identity();
        let out = comb_sequence(&d, 1, &[], &spec, &standard_battery()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn schedule_below_bound_rejected() {
        let spec = BumpSpec::default();
        let d: Distribution<Complex64> = Distribution::delta(pt(1, 2));
        assert!(comb_sequence(&d, 1, &[(1, 8)], &spec, &standard_battery()).is_err());
    }

    #[test]
    fn default_schedule_shape() {
        assert_eq!(default_schedule(2, 1, 3), vec![(2, 16), (4, 64), (8, 256)]);
    }
}
