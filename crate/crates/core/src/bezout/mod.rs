//! Approximation of a comb pair by a unimodular comb pair.
//!
//! For `T, S` on the `1/n` grid with support indices in `{−L..L}`:
//! center to ordinary polynomials `p_T, p_S` of degree `≤ 2L`, perturb to a
//! coprime pair within `ε = 1/(2^k·2L)`, solve `p̃_T·q_T + p̃_S·q_S = 1`,
//! lift `Q = z^L·q`, `P = z^{−L}·p̃`, and apply `Φ` to get
//! `T_k∗U_k + S_k∗V_k = δ_0`.

mod cofactors;
mod perturb;

use num_complex::Complex64;
use serde::Serialize;

pub use cofactors::{bezout_cofactors, identity_residual, CofactorField, RESIDUAL_GATE};
pub(crate) use cofactors::{clear_denominators, GaussInt};
pub use perturb::{
    perturb_to_coprime, PerturbOptions, Perturbation, RootShift, HALVINGS_PER_DIRECTION,
    MIN_SEPARATION, MIN_SHIFT,
};

use crate::distr::{DiracComb, Distribution};
use crate::error::{Error, Result};
use crate::laurent::{comb_to_centered_poly, phi, LaurentPoly};
use crate::scalar::Scalar;

/// Retries of the perturbation when the cofactor solve fails its gate.
pub const MAX_RETRIES: usize = 5;

/// `ε = 1/(2^k · 2L)`, with `L` read as 1 when both inputs are `δ_0`-sized.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerturbationBudget {
    pub k: u32,
    pub support_bound: i64,
    pub epsilon: f64,
}

impl PerturbationBudget {
    pub fn new(k: u32, support_bound: i64) -> Result<Self> {
        if k == 0 || k > 60 {
            return Err(Error::InvalidArgument(format!("k must be in 1..=60, got {k}")));
        }
        let l = support_bound.max(1);
        Ok(Self {
            k,
            support_bound,
            epsilon: 1.0 / ((1u64 << k) as f64 * 2.0 * l as f64),
        })
    }

    /// `2^{−k}`, the admissible `ℓ¹` coefficient deviation.
    pub fn weak_budget(&self) -> f64 {
        self.epsilon * 2.0 * self.support_bound.max(1) as f64
    }
}

#[derive(Clone, Debug)]
pub struct UnimodularQuadruple<C> {
    pub t: DiracComb<C>,
    pub s: DiracComb<C>,
    pub u: DiracComb<C>,
    pub v: DiracComb<C>,
    pub budget: PerturbationBudget,
    pub residual: f64,
    /// `(max_ℓ |t_ℓ − t̃_ℓ|, max_ℓ |s_ℓ − s̃_ℓ|)`.
    pub distances: (f64, f64),
    /// `Σ_ℓ |s_ℓ − s̃_ℓ|` (and likewise for `t`).
    pub l1_distances: (f64, f64),
    pub shift: Option<RootShift>,
    /// `(deg q_T, deg q_S)`, `None` for a zero cofactor.
    pub cofactor_degrees: (Option<i64>, Option<i64>),
    pub retries: usize,
}

impl<C: CofactorField> UnimodularQuadruple<C> {
    pub fn residual_now(&self) -> f64 {
        bezout_residual(
            &self.t.to_distribution(),
            &self.s.to_distribution(),
            &self.u.to_distribution(),
            &self.v.to_distribution(),
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    pub seed: u64,
    pub max_retries: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            max_retries: MAX_RETRIES,
        }
    }
}

/// `max |coeff| of T∗U + S∗V − δ_0`.
pub fn bezout_residual<C: CofactorField>(
    t: &Distribution<C>,
    s: &Distribution<C>,
    u: &Distribution<C>,
    v: &Distribution<C>,
) -> f64 {
    C::bezout_defect(t, s, u, v)
}

fn add_delta<C: Scalar>(p: &LaurentPoly<C>, delta: &LaurentPoly<Complex64>) -> LaurentPoly<C> {
    p.add(&delta.map_scalar(|c| C::from_c64(*c)))
}

/// Approximate `(T, S)` within `ε` by a comb pair and return it with its Bézout cofactors.
pub fn unimodular_approx_pair<C: CofactorField>(
    t: &DiracComb<C>,
    s: &DiracComb<C>,
    k: u32,
    opts: &PipelineOptions,
) -> Result<UnimodularQuadruple<C>> {
    let n = t.denominator();
    if s.denominator() != n {
        return Err(Error::InvalidArgument(format!(
            "combs must share a denominator ({} vs {})",
            n,
            s.denominator()
        )));
    }
    let bound = t.max_abs_index().unwrap_or(0).max(s.max_abs_index().unwrap_or(0));
    let budget = PerturbationBudget::new(k, bound)?;
    let p = comb_to_centered_poly(t, bound)?;
    let q = comb_to_centered_poly(s, bound)?;
    let (pf, qf) = (p.to_float(), q.to_float());

    let mut last_err = None;
    for retry in 0..=opts.max_retries {
        let mut popts = PerturbOptions::new(budget.weak_budget(), opts.seed.wrapping_add(retry as u64));
        let widen = 100f64.powi(retry as i32);
        popts.detect_radius *= widen;
        popts.backward_tol *= widen;
        let pert = perturb_to_coprime(&pf, &qf, budget.epsilon, &popts)?;
        let pt = add_delta(&p, &pert.delta_p);
        let qs = add_delta(&q, &pert.delta_q);
        let (qt, qsv) = match bezout_cofactors(&pt, &qs) {
            Ok(c) => c,
            Err(e @ Error::NotCoprime { .. }) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let tk = phi(&pt.shift(-bound), n);
        let sk = phi(&qs.shift(-bound), n);
        let uk = phi(&qt.shift(bound), n);
        let vk = phi(&qsv.shift(bound), n);
        let residual = bezout_residual(
            &tk.to_distribution(),
            &sk.to_distribution(),
            &uk.to_distribution(),
            &vk.to_distribution(),
        );
        let dt = t.to_distribution().sub(&tk.to_distribution());
        let ds = s.to_distribution().sub(&sk.to_distribution());
        let l1 = |d: &Distribution<C>| d.terms().iter().map(|x| x.coeff.modulus()).sum::<f64>();
        return Ok(UnimodularQuadruple {
            distances: (dt.max_coeff_modulus(), ds.max_coeff_modulus()),
            l1_distances: (l1(&dt), l1(&ds)),
            t: tk,
            s: sk,
            u: uk,
            v: vk,
            budget,
            residual,
            shift: pert.shift,
            cofactor_degrees: (qt.degree(), qsv.degree()),
            retries: retry,
        });
    }
    Err(last_err.unwrap_or(Error::NotCoprime { residual: f64::NAN }))
}
