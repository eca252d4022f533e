//! Fourier–Laplace transforms `T̂(z) = ⟨T, x ↦ e^{−2πixz}⟩` of point
//! distributions, growth certificates and grid diagnostics.
//!
//! Grid minima are minima over grid points only; nothing here claims a
//! continuum zero.

mod substitution;

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distr::Distribution;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Grid minima below this are reported as suspected zeros.
pub const ZERO_THRESHOLD: f64 = 1e-2;
/// Resolution factor of the refinement pass around a grid minimum.
pub const REFINE_FACTOR: usize = 4;

/// Square grid of `resolution × resolution` points covering the closed
/// square circumscribing the disk `|z − center| ≤ radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub center_re: f64,
    pub center_im: f64,
    pub radius: f64,
    pub resolution: usize,
}

impl GridSpec {
    pub fn new(center: Complex64, radius: f64, resolution: usize) -> Result<Self> {
        if resolution < 2 || !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "grid needs resolution >= 2 and radius > 0, got {resolution} and {radius}"
            )));
        }
        Ok(Self {
            center_re: center.re,
            center_im: center.im,
            radius,
            resolution,
        })
    }

    /// The disk `|z| ≤ 1` sampled at 201 × 201 points.
    pub fn unit_disk(resolution: usize) -> Self {
        Self::new(Complex64::new(0.0, 0.0), 1.0, resolution).expect("valid grid")
    }

    /// Validation grid for growth certificates: radius 4, resolution 41.
    pub fn certificate_default() -> Self {
        Self::new(Complex64::new(0.0, 0.0), 4.0, 41).expect("valid grid")
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(self.center_re, self.center_im)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.radius / (self.resolution - 1) as f64
    }

    /// Points in lexicographic `(re index, im index)` order.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        let h = self.spacing();
        let lo = self.center() - Complex64::new(self.radius, self.radius);
        (0..self.resolution).flat_map(move |i| {
            (0..self.resolution).map(move |j| lo + Complex64::new(h * i as f64, h * j as f64))
        })
    }

    /// Grid points inside the closed disk.
    pub fn disk_points(&self) -> impl Iterator<Item = Complex64> + '_ {
        let c = self.center();
        let r = self.radius * (1.0 + 1e-12);
        self.points().filter(move |z| (z - c).norm() <= r)
    }

    /// The `REFINE_FACTOR`-times finer grid on the cell neighbourhood of `z`.
    pub fn refined_around(&self, z: Complex64) -> Self {
        let h = self.spacing();
        Self {
            center_re: z.re,
            center_im: z.im,
            radius: h,
            resolution: 2 * REFINE_FACTOR + 1,
        }
    }
}

/// `c·δ_a^{(r)} ↦ c·(2πiz)^r·e^{−2πiaz}`, summed.
pub fn fl_eval<C: Scalar>(d: &Distribution<C>, z: Complex64) -> Complex64 {
    let w = Complex64::new(0.0, 2.0 * PI) * z;
    let mut total = Complex64::new(0.0, 0.0);
    for t in d.terms() {
        let mut pow = Complex64::new(1.0, 0.0);
        for _ in 0..t.order {
            pow *= w;
        }
        total += t.coeff.to_c64() * pow * (-w * t.location.to_f64()).exp();
    }
    total
}

/// `|T̂(z)| ≤ C (1+|z|)^M e^{R|z|}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PwCertificate {
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "R")]
    pub r: f64,
    pub validation_grid: GridSpec,
    /// `max_z (|T̂(z)| − bound(z))` over the validation grid. When valid it is
    /// `≤ 0` up to rounding; a bound attained on the grid can leave a tiny positive value.
    pub max_slack: f64,
    pub violations: usize,
}

impl PwCertificate {
    pub fn bound(&self, z: Complex64) -> f64 {
        let a = z.norm();
        self.c * (1.0 + a).powi(self.m as i32) * (self.r * a).exp()
    }

    pub fn is_valid(&self) -> bool {
        self.violations == 0
    }

    /// Count grid points where the bound fails.
    pub fn validate<C: Scalar>(&self, d: &Distribution<C>, grid: &GridSpec) -> (usize, f64) {
        let mut violations = 0;
        let mut slack = f64::NEG_INFINITY;
        for z in grid.points() {
            let value = fl_eval(d, z).norm();
            let bound = self.bound(z);
            slack = slack.max(value - bound);
            if value > bound * (1.0 + 1e-12) {
                violations += 1;
            }
        }
        (violations, slack)
    }
}

/// `C = Σ|c_j|(2π)^{r_j}`, `M = max r_j`, `R = 2π max|a_j|`, validated on
/// [`GridSpec::certificate_default`].
pub fn pw_constants<C: Scalar>(d: &Distribution<C>) -> Result<PwCertificate> {
    pw_constants_on(d, &GridSpec::certificate_default())
}

pub fn pw_constants_on<C: Scalar>(d: &Distribution<C>, grid: &GridSpec) -> Result<PwCertificate> {
    if d.is_zero() {
        return Err(Error::ZeroDistribution);
    }
    let c = d
        .terms()
        .iter()
        .map(|t| t.coeff.modulus() * (2.0 * PI).powi(t.order as i32))
        .sum();
    let m = d.max_order();
    let r = 2.0
        * PI
        * d.terms()
            .iter()
            .map(|t| t.location.to_f64().abs())
            .fold(0.0, f64::max);
    let mut cert = PwCertificate {
        c,
        m,
        r,
        validation_grid: *grid,
        max_slack: 0.0,
        violations: 0,
    };
    let (violations, slack) = cert.validate(d, grid);
    cert.violations = violations;
    cert.max_slack = slack;
    Ok(cert)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridMin {
    pub value: f64,
    pub argmin_re: f64,
    pub argmin_im: f64,
}

impl GridMin {
    pub fn argmin(&self) -> Complex64 {
        Complex64::new(self.argmin_re, self.argmin_im)
    }
}

fn grid_min(grid: &GridSpec, f: impl Fn(Complex64) -> f64) -> GridMin {
    let mut best = GridMin {
        value: f64::INFINITY,
        argmin_re: f64::NAN,
        argmin_im: f64::NAN,
    };
    for z in grid.points() {
        let v = f(z);
        // strict comparison keeps the first point in grid order on ties
        if v < best.value {
            best = GridMin {
                value: v,
                argmin_re: z.re,
                argmin_im: z.im,
            };
        }
    }
    best
}

/// `min |T̂|` over the grid points.
pub fn min_modulus_grid<C: Scalar>(d: &Distribution<C>, grid: &GridSpec) -> GridMin {
    grid_min(grid, |z| fl_eval(d, z).norm())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZeroDiagnosis {
    pub coarse: GridMin,
    pub refined: GridMin,
    pub zero_suspected: bool,
}

/// Coarse grid minimum, one refinement level around it, and the
/// threshold decision.
pub fn detect_zero<C: Scalar>(d: &Distribution<C>, grid: &GridSpec) -> ZeroDiagnosis {
    let coarse = min_modulus_grid(d, grid);
    let refined_grid = grid.refined_around(coarse.argmin());
    let fine = min_modulus_grid(d, &refined_grid);
    let refined = if fine.value < coarse.value { fine } else { coarse };
    ZeroDiagnosis {
        coarse,
        refined,
        zero_suspected: refined.value < ZERO_THRESHOLD,
    }
}

/// `min (|T̂_1| + |T̂_2|)` over the grid points.
pub fn coprime_certificate_grid<C: Scalar>(
    d1: &Distribution<C>,
    d2: &Distribution<C>,
    grid: &GridSpec,
) -> GridMin {
    grid_min(grid, |z| fl_eval(d1, z).norm() + fl_eval(d2, z).norm())
}

/// `max |T̂Û + ŜV̂ − 1|` over the disk points of the grid.
///
/// With `N` the common denominator of all locations, `c·δ_{k/N}^{(r)} ↦ c·ζ^r·w^k`
/// is a ring homomorphism for any `ζ, w`. The residual is evaluated at the
/// rounded `ζ = 2πiz`, `w = e^{−ζ/N}`, exactly over `ℤ[i]` in exact mode and
/// in double-double arithmetic in float mode, so rounding in `ζ` and `w`
/// cannot show up as a defect. Falls back to [`fl_eval`] when the exponents
/// `k` do not fit in an `i64`.
pub fn transform_bezout_residual<C: Scalar>(
    t: &Distribution<C>,
    s: &Distribution<C>,
    u: &Distribution<C>,
    v: &Distribution<C>,
    grid: &GridSpec,
) -> f64 {
    if let Some(r) = substitution::residual([t, s, u, v], grid) {
        return r;
    }
    grid.disk_points()
        .map(|z| (fl_eval(t, z) * fl_eval(u, z) + fl_eval(s, z) * fl_eval(v, z) - 1.0).norm())
        .fold(0.0, f64::max)
}

/// Rows `re z, im z, re T̂, im T̂, |T̂|` with a header.
pub fn write_grid_csv<W: Write, C: Scalar>(
    mut w: W,
    d: &Distribution<C>,
    grid: &GridSpec,
) -> std::io::Result<()> {
    writeln!(w, "re_z,im_z,re_t,im_t,abs_t")?;
    for z in grid.points() {
        let v = fl_eval(d, z);
        writeln!(w, "{:e},{:e},{:e},{:e},{:e}", z.re, z.im, v.re, v.im, v.norm())?;
    }
    Ok(())
}
