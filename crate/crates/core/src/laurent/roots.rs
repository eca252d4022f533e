//! All roots of a polynomial by Aberth–Ehrlich simultaneous iteration.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LaurentPoly;
use crate::error::{Error, Result};

/// Roots closer than this are reported as one cluster.
pub const CLUSTER_RADIUS: f64 = 1e-8;

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    pub max_iterations: usize,
    /// Per-root stop when `|step| < step_tol · (1 + |ρ|)`.
    pub step_tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            step_tol: 1e-13,
            restarts: 3,
            seed: 0x5eed,
        }
    }
}

/// Roots with multiplicity of `p / z^{val(p)}`.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `max_ρ |p(ρ)|`.
    pub residual_bound: f64,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Single-linkage clusters within `radius`: `(centroid, multiplicity)`.
    pub fn clusters(&self, radius: f64) -> Vec<(Complex64, usize)> {
        cluster_points(&self.roots, radius)
            .into_iter()
            .map(|members| {
                let sum: Complex64 = members.iter().map(|&i| self.roots[i]).sum();
                (sum / members.len() as f64, members.len())
            })
            .collect()
    }
}

/// Index groups of points connected by chains of distance `<= radius`.
pub(crate) fn cluster_points(points: &[Complex64], radius: f64) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..points.len()).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if (points[i] - points[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of = vec![usize::MAX; points.len()];
    for i in 0..points.len() {
        let r = find(&mut label, i);
        if root_of[r] == usize::MAX {
            root_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_of[r]].push(i);
    }
    groups
}

/// `p(z)`, `p'(z)` and a running rounding-error bound for Horner's scheme.
fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let az = z.norm();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        err = err * az + p.norm();
    }
    (p, dp, err * f64::EPSILON * 4.0)
}

/// `Σ |a_i| |z|^i`.
fn magnitude_scale(coeffs: &[Complex64], z: Complex64) -> f64 {
    let az = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * az + c.norm())
}

fn fujiwara_bound(coeffs: &[Complex64]) -> f64 {
    let d = coeffs.len() - 1;
    let lead = coeffs[d].norm();
    let mut bound: f64 = 0.0;
    for i in 1..d {
        bound = bound.max((coeffs[d - i].norm() / lead).powf(1.0 / i as f64));
    }
    bound = bound.max((coeffs[0].norm() / (2.0 * lead)).powf(1.0 / d as f64));
    2.0 * bound
}

/// Aberth–Ehrlich on dense ascending coefficients with nonzero leading and
/// constant terms. Returns the roots and whether every root met a stop test.
fn aberth(coeffs: &[Complex64], opts: &RootOptions) -> (Vec<Complex64>, bool, usize) {
    let d = coeffs.len() - 1;
    if d == 1 {
        return (vec![-coeffs[0] / coeffs[1]], true, 0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let radius = fujiwara_bound(coeffs);
    let mut z: Vec<Complex64> = (0..d)
        .map(|j| {
            let jitter: f64 = rng.gen_range(-0.25..0.25);
            let angle = TAU * (j as f64 + 0.5 + jitter) / d as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    let mut done = vec![false; d];
    let mut iterations = 0;
    for attempt in 0..=opts.restarts {
        if attempt > 0 {
            // kick unconverged roots off their attractor
            for (zi, fin) in z.iter_mut().zip(&done) {
                if !fin {
                    let r = 1e-3 * (1.0 + zi.norm());
                    *zi += Complex64::from_polar(r, rng.gen_range(0.0..TAU));
                }
            }
        }
        for _ in 0..opts.max_iterations {
            iterations += 1;
            for j in 0..d {
                if done[j] {
                    continue;
                }
                let (p, dp, err) = horner(coeffs, z[j]);
                if p.norm() <= err {
                    done[j] = true;
                    continue;
                }
                let w = p / dp;
                let s: Complex64 = (0..d)
                    .filter(|&k| k != j)
                    .map(|k| Complex64::new(1.0, 0.0) / (z[j] - z[k]))
                    .sum();
                let step = w / (Complex64::new(1.0, 0.0) - w * s);
                if !step.is_finite() {
                    continue;
                }
                z[j] -= step;
                if step.norm() < opts.step_tol * (1.0 + z[j].norm()) {
                    done[j] = true;
                }
            }
            if done.iter().all(|&f| f) {
                return (z, true, iterations);
            }
        }
    }
    (z, false, iterations)
}

/// Roots of `p / z^{val(p)}` with the default options.
pub fn roots(p: &LaurentPoly<Complex64>, tol: f64) -> Result<RootSet> {
    roots_with(p, tol, &RootOptions::default())
}

/// Roots of `p / z^{val(p)}`; each root's normalized residual
/// `|p(ρ)| / Σ|a_i||ρ|^i` must be at most `tol`.
pub fn roots_with(p: &LaurentPoly<Complex64>, tol: f64, opts: &RootOptions) -> Result<RootSet> {
    let (Some(val), Some(deg)) = (p.valuation(), p.degree()) else {
        return Err(Error::InvalidArgument("roots of the zero polynomial".into()));
    };
    let dense = p.dense(val, deg);
    if dense.len() == 1 {
        return Ok(RootSet {
            roots: Vec::new(),
            residual_bound: 0.0,
        });
    }
    let (found, _converged, iterations) = aberth(&dense, opts);
    let mut worst: f64 = 0.0;
    let mut residual_bound: f64 = 0.0;
    for &r in &found {
        let (v, _, _) = horner(&dense, r);
        worst = worst.max(v.norm() / magnitude_scale(&dense, r));
        residual_bound = residual_bound.max(p.eval_c64(r).norm());
    }
    if !(worst <= tol) {
        return Err(Error::NoConvergence {
            iterations,
            residual: worst,
        });
    }
    Ok(RootSet {
        roots: found,
        residual_bound,
    })
}

/// Ascending coefficients of `lead · Π (z − ρ)`.
pub fn expand_from_roots(lead: Complex64, roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![lead];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= ci * r;
        }
        c = next;
    }
    c
}
