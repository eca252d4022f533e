//! Coefficient perturbation that removes common roots.
//!
//! Common roots of `p` and `q` are moved by shifting the matching roots of
//! `q` by `ε'·dir`. The new `q` is `q + C'·R·(A − B)` where `R` collects the
//! untouched roots of `q`, `B` the shifted ones before and `A` after the
//! move, so untouched coefficients are not disturbed by root round-off.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{expand_from_roots, roots_with, LaurentPoly, RootOptions};

/// Minimum distance between roots of the two outputs.
pub const MIN_SEPARATION: f64 = 1e-7;
/// Halvings between re-randomizations of the shift direction.
pub const HALVINGS_PER_DIRECTION: usize = 20;
/// Smallest shift tried before giving up.
pub const MIN_SHIFT: f64 = 1e-15;

#[derive(Clone, Copy, Debug)]
pub struct PerturbOptions {
    /// A root `β` of `q` counts as common when it lies within
    /// `detect_radius·(1+|β|)` of a root of `p` ...
    pub detect_radius: f64,
    /// ... or when `|p(β)| / Σ|p_i||β|^i` is at most this.
    pub backward_tol: f64,
    /// Upper bound for `Σ_ℓ |q_ℓ − q̃_ℓ|` (in addition to `max < ε`).
    pub l1_budget: f64,
    pub root_tol: f64,
    pub seed: u64,
}

impl PerturbOptions {
    pub fn new(l1_budget: f64, seed: u64) -> Self {
        Self {
            detect_radius: 1e-6,
            backward_tol: 1e-9,
            l1_budget,
            root_tol: 1e-10,
            seed,
        }
    }
}

/// Record of the root shift applied to `q`.
#[derive(Clone, Debug, Serialize)]
pub struct RootShift {
    pub epsilon_prime: f64,
    pub direction: (f64, f64),
    pub halvings: usize,
    /// Shifted roots before the move, ordered by ascending modulus.
    pub cluster: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct Perturbation {
    pub p: LaurentPoly<Complex64>,
    pub q: LaurentPoly<Complex64>,
    pub delta_p: LaurentPoly<Complex64>,
    pub delta_q: LaurentPoly<Complex64>,
    pub shift: Option<RootShift>,
    /// Smallest distance between a root of `p̃` and a root of `q̃`.
    pub separation: f64,
}

impl Perturbation {
    fn unchanged(p: &LaurentPoly<Complex64>, q: &LaurentPoly<Complex64>, separation: f64) -> Self {
        Self {
            p: p.clone(),
            q: q.clone(),
            delta_p: LaurentPoly::zero(),
            delta_q: LaurentPoly::zero(),
            shift: None,
            separation,
        }
    }

    /// `max_ℓ |p_ℓ − p̃_ℓ|`.
    pub fn p_distance(&self) -> f64 {
        self.delta_p.max_coeff_modulus()
    }

    pub fn q_distance(&self) -> f64 {
        self.delta_q.max_coeff_modulus()
    }

    pub fn q_l1(&self) -> f64 {
        l1(&self.delta_q)
    }
}

fn l1(p: &LaurentPoly<Complex64>) -> f64 {
    p.terms().map(|(_, c)| c.norm()).sum()
}

/// Roots including `val(p)` copies of zero.
fn all_roots(p: &LaurentPoly<Complex64>, opts: &PerturbOptions) -> Result<Vec<Complex64>> {
    let val = p.valuation().unwrap_or(0);
    let mut out = vec![Complex64::new(0.0, 0.0); val.max(0) as usize];
    let root_opts = RootOptions {
        seed: opts.seed,
        ..RootOptions::default()
    };
    out.extend(roots_with(p, opts.root_tol, &root_opts)?.roots);
    Ok(out)
}

fn backward_error(coeffs: &[Complex64], z: Complex64) -> f64 {
    let az = z.norm();
    let (mut v, mut scale) = (Complex64::new(0.0, 0.0), 0.0);
    for c in coeffs.iter().rev() {
        v = v * z + c;
        scale = scale * az + c.norm();
    }
    if scale == 0.0 {
        0.0
    } else {
        v.norm() / scale
    }
}

fn separation(alpha: &[Complex64], beta: &[Complex64]) -> f64 {
    alpha
        .iter()
        .flat_map(|a| beta.iter().map(move |b| (a - b).norm()))
        .fold(f64::INFINITY, f64::min)
}

/// Unit vector from the nearest root of `p` to `b`, or `1` when they coincide.
fn away_from(alpha: &[Complex64], b: Complex64) -> Complex64 {
    let nearest = alpha.iter().copied().min_by(|x, y| (x - b).norm().total_cmp(&(y - b).norm()));
    match nearest {
        Some(a) if (b - a).norm() > MIN_SEPARATION => (b - a) / (b - a).norm(),
        _ => Complex64::new(1.0, 0.0),
    }
}

/// Perturb `q` (and `p` only when it is zero) so the pair has no common
/// roots, with every coefficient moved by less than `epsilon`.
pub fn perturb_to_coprime(
    p: &LaurentPoly<Complex64>,
    q: &LaurentPoly<Complex64>,
    epsilon: f64,
    opts: &PerturbOptions,
) -> Result<Perturbation> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    for poly in [p, q] {
        if poly.valuation().is_some_and(|v| v < 0) {
            return Err(Error::InvalidArgument(
                "perturbation needs ordinary polynomials".into(),
            ));
        }
    }
    let half = LaurentPoly::monomial(Complex64::new(epsilon / 2.0, 0.0), 0);
    if p.is_zero() {
        return Ok(Perturbation {
            p: half.clone(),
            q: q.clone(),
            delta_p: half,
            delta_q: LaurentPoly::zero(),
            shift: None,
            separation: f64::INFINITY,
        });
    }
    if p.is_unit_constant() || q.is_unit_constant() {
        return Ok(Perturbation::unchanged(p, q, f64::INFINITY));
    }
    if q.is_zero() {
        return Ok(Perturbation {
            p: p.clone(),
            q: half.clone(),
            delta_p: LaurentPoly::zero(),
            delta_q: half,
            shift: None,
            separation: f64::INFINITY,
        });
    }

    let alpha = all_roots(p, opts)?;
    let beta = all_roots(q, opts)?;
    let p_dense = p.dense(0, p.degree().unwrap_or(0));

    let common: Vec<usize> = (0..beta.len())
        .filter(|&j| {
            let b = beta[j];
            alpha
                .iter()
                .any(|a| (a - b).norm() <= opts.detect_radius * (1.0 + b.norm()))
                || backward_error(&p_dense, b) <= opts.backward_tol
        })
        .collect();
    let sep0 = separation(&alpha, &beta);
    if common.is_empty() && sep0 > MIN_SEPARATION {
        return Ok(Perturbation::unchanged(p, q, sep0));
    }
    let mut shifted: Vec<usize> = if common.is_empty() {
        // closest root of q to any root of p
        (0..beta.len())
            .min_by(|&i, &j| {
                separation(&alpha, &beta[i..=i]).total_cmp(&separation(&alpha, &beta[j..=j]))
            })
            .into_iter()
            .collect()
    } else {
        common
    };
    shifted.sort_by(|&i, &j| beta[i].norm().total_cmp(&beta[j].norm()).then(i.cmp(&j)));

    let lead = *q.leading_coeff().expect("nonzero q");
    let moving: Vec<Complex64> = shifted.iter().map(|&j| beta[j]).collect();
    let fixed: Vec<Complex64> = (0..beta.len())
        .filter(|j| !shifted.contains(j))
        .map(|j| beta[j])
        .collect();
    let rest = LaurentPoly::from_dense(0, expand_from_roots(lead, &fixed));
    let before = LaurentPoly::from_dense(0, expand_from_roots(Complex64::new(1.0, 0.0), &moving));
    let cluster: Vec<(f64, f64)> = moving.iter().map(|z| (z.re, z.im)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut direction = away_from(&alpha, moving[0]);
    let mut eps_prime = epsilon / 2.0;
    let mut halvings = 0;
    while eps_prime >= MIN_SHIFT {
        let moved: Vec<Complex64> = moving.iter().map(|b| b + direction * eps_prime).collect();
        let after = LaurentPoly::from_dense(0, expand_from_roots(Complex64::new(1.0, 0.0), &moved));
        let delta = rest.mul(&after.sub(&before));
        if delta.max_coeff_modulus() < epsilon && l1(&delta) < opts.l1_budget {
            let new_beta: Vec<Complex64> = fixed.iter().chain(&moved).copied().collect();
            let sep = separation(&alpha, &new_beta);
            if sep > MIN_SEPARATION {
                return Ok(Perturbation {
                    p: p.clone(),
                    q: q.add(&delta),
                    delta_p: LaurentPoly::zero(),
                    delta_q: delta,
                    shift: Some(RootShift {
                        epsilon_prime: eps_prime,
                        direction: (direction.re, direction.im),
                        halvings,
                        cluster,
                    }),
                    separation: sep,
                });
            }
        }
        eps_prime /= 2.0;
        halvings += 1;
        if halvings % HALVINGS_PER_DIRECTION == 0 {
            direction = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        }
    }
    Err(Error::BudgetExhausted { cluster })
}
