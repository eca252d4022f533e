//! The two-stage approximation as an executable pipeline, plus the report
//! types behind each CLI subcommand.

use num_complex::Complex64;
use serde::Serialize;

use crate::bezout::{unimodular_approx_pair, CofactorField, PipelineOptions, RootShift, RESIDUAL_GATE};
use crate::distr::{DiracComb, Distribution, Inverse, RationalPoint, SupportHull};
use crate::error::{Error, Result};
use crate::json::{AnyDistribution, DistributionJson, QuadrupleJson};
use crate::mollify::{comb_sequence, default_schedule, minimal_index, BumpSpec, SampleStep, TestFunction};
use crate::scalar::{GaussianRational, Scalar, ScalarMode};
use crate::transform::{
    detect_zero, pw_constants, transform_bezout_residual, GridSpec, PwCertificate, ZeroDiagnosis,
};

/// Points per unit length when taking the sampled sup of a test function.
const SUP_SAMPLES: usize = 2001;

/// Smallest integer `k ≥ 1` with `supp T ⊂ (−k, k)`.
pub fn support_index<C: Scalar>(d: &Distribution<C>) -> i64 {
    match d.support_hull() {
        SupportHull::Empty => 1,
        SupportHull::Interval { lo, hi } => {
            let r = lo.abs().to_f64().max(hi.abs().to_f64());
            (r.floor() as i64 + 1).max(1)
        }
    }
}

#[derive(Clone, Debug)]
pub struct ApproxConfig {
    /// Stage 2 runs for `k = 1..=max_k`.
    pub max_k: u32,
    /// Stage-1 schedule; `None` picks one step of the default schedule.
    pub schedule: Option<Vec<(u64, u64)>>,
    pub battery: Vec<TestFunction>,
    pub seed: u64,
    pub spec: BumpSpec,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        Self {
            max_k: 3,
            schedule: None,
            battery: crate::mollify::standard_battery(),
            seed: 0,
            spec: BumpSpec::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputsEcho {
    #[serde(rename = "T")]
    pub t: DistributionJson,
    #[serde(rename = "S")]
    pub s: DistributionJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct Stage1Step {
    pub m: u64,
    pub n: u64,
    pub weak_error_t: f64,
    pub weak_error_s: f64,
    pub mollify_error_t: f64,
    pub mollify_error_s: f64,
    pub riemann_error_t: f64,
    pub riemann_error_s: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Stage1Report {
    pub support_index: i64,
    pub min_mollifier_index: u64,
    pub steps: Vec<Stage1Step>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakRow {
    pub battery_index: usize,
    pub family: &'static str,
    /// `|⟨T − T_k, ψ⟩|` against the original input.
    pub total_t: f64,
    pub total_s: f64,
    /// `|⟨T_comb − T_k, ψ⟩|` against the stage-2 input comb.
    pub stage2_t: f64,
    pub stage2_s: f64,
    /// `2^{−k}·sup|ψ|` on `[−L/n, L/n]`.
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Stage2Report {
    pub k: u32,
    pub denominator: u64,
    pub support_bound: i64,
    pub epsilon: f64,
    pub epsilon_prime: Option<f64>,
    pub root_shift: Option<RootShift>,
    pub distances: (f64, f64),
    pub l1_distances: (f64, f64),
    pub cofactor_degrees: (Option<i64>, Option<i64>),
    pub retries: usize,
    pub residual: f64,
    pub weak_errors: Vec<WeakRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproxReport {
    pub mode: ScalarMode,
    pub inputs: InputsEcho,
    pub seed: u64,
    /// `None` when both inputs are already combs.
    pub stage1: Option<Stage1Report>,
    pub stage2: Vec<Stage2Report>,
    pub residual_gate: f64,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct ApproxOutcome {
    pub report: ApproxReport,
    /// One quadruple per `k`, in order.
    pub quadruples: Vec<(u32, QuadrupleJson)>,
}

fn stage2_combs<C: Scalar>(t: &Distribution<C>, s: &Distribution<C>) -> Result<(DiracComb<C>, DiracComb<C>)> {
    let n = RationalPoint::common_denominator(
        t.terms().iter().chain(s.terms()).map(|x| &x.location),
    );
    Ok((DiracComb::from_distribution(t, n)?, DiracComb::from_distribution(s, n)?))
}

fn stage1<C: Scalar>(
    t: &Distribution<C>,
    s: &Distribution<C>,
    cfg: &ApproxConfig,
) -> Result<(Stage1Report, DiracComb<C>, DiracComb<C>)> {
    let k = support_index(t).max(support_index(s));
    let m_min = minimal_index(t, k, &cfg.spec)?.max(minimal_index(s, k, &cfg.spec)?);
    let schedule = match &cfg.schedule {
        Some(s) if s.is_empty() => {
            return Err(Error::InvalidArgument("sampling schedule is empty".into()))
        }
        Some(s) => s.clone(),
        None => default_schedule(m_min, k, 1),
    };
    let st = comb_sequence(t, k, &schedule, &cfg.spec, &cfg.battery)?;
    let ss = comb_sequence(s, k, &schedule, &cfg.spec, &cfg.battery)?;
    let steps = st
        .iter()
        .zip(&ss)
        .map(|(a, b)| Stage1Step {
            m: a.m,
            n: a.n,
            weak_error_t: a.weak_error(),
            weak_error_s: b.weak_error(),
            mollify_error_t: a.mollify_error(),
            mollify_error_s: b.mollify_error(),
            riemann_error_t: a.riemann_error(),
            riemann_error_s: b.riemann_error(),
        })
        .collect();
    let lift = |step: &SampleStep| {
        DiracComb::from_coeffs(step.n, step.comb.iter().map(|(i, c)| (i, C::from_c64(*c))))
    };
    let (lt, ls) = (lift(st.last().expect("nonempty")), lift(ss.last().expect("nonempty")));
    Ok((
        Stage1Report {
            support_index: k,
            min_mollifier_index: m_min,
            steps,
        },
        lt,
        ls,
    ))
}

fn pair_diff<C: Scalar>(a: &Distribution<C>, b: &Distribution<C>, psi: &TestFunction) -> Result<f64> {
    Ok((a.pair(psi)? - b.pair(psi)?).norm())
}

fn approx_typed<C: CofactorField>(
    t: &Distribution<C>,
    s: &Distribution<C>,
    cfg: &ApproxConfig,
) -> Result<ApproxOutcome> {
    if cfg.max_k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if cfg.battery.is_empty() {
        return Err(Error::EmptyBattery);
    }
    let direct = t.max_order() == 0 && s.max_order() == 0 && cfg.schedule.is_none();
    let (stage1_report, ct, cs) = if direct {
        let (a, b) = stage2_combs(t, s)?;
        (None, a, b)
    } else {
        let (r, a, b) = stage1(t, s, cfg)?;
        (Some(r), a, b)
    };
    let (dt, ds) = (ct.to_distribution(), cs.to_distribution());
    let n = ct.denominator();
    let mut stage2 = Vec::new();
    let mut quadruples = Vec::new();
    for k in 1..=cfg.max_k {
        let opts = PipelineOptions {
            seed: cfg.seed.wrapping_add(k as u64),
            ..PipelineOptions::default()
        };
        let quad = unimodular_approx_pair(&ct, &cs, k, &opts)?;
        let (tk, sk) = (quad.t.to_distribution(), quad.s.to_distribution());
        let l = quad.budget.support_bound;
        let extra: Vec<f64> = (-l..=l).map(|i| i as f64 / n as f64).collect();
        let half = l as f64 / n as f64;
        let samples = ((2.0 * half).ceil() as usize * SUP_SAMPLES).max(SUP_SAMPLES);
        let weak_errors = cfg
            .battery
            .iter()
            .enumerate()
            .map(|(i, psi)| {
                Ok(WeakRow {
                    battery_index: i,
                    family: psi.family_name(),
                    total_t: pair_diff(t, &tk, psi)?,
                    total_s: pair_diff(s, &sk, psi)?,
                    stage2_t: pair_diff(&dt, &tk, psi)?,
                    stage2_s: pair_diff(&ds, &sk, psi)?,
                    bound: quad.budget.weak_budget() * psi.sampled_sup(-half, half, samples, &extra),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        quadruples.push((
            k,
            QuadrupleJson::from_parts(&tk, &sk, &quad.u.to_distribution(), &quad.v.to_distribution()),
        ));
        stage2.push(Stage2Report {
            k,
            denominator: n,
            support_bound: l,
            epsilon: quad.budget.epsilon,
            epsilon_prime: quad.shift.as_ref().map(|s| s.epsilon_prime),
            root_shift: quad.shift.clone(),
            distances: quad.distances,
            l1_distances: quad.l1_distances,
            cofactor_degrees: quad.cofactor_degrees,
            retries: quad.retries,
            residual: quad.residual,
            weak_errors,
        });
    }
    let passed = stage2.iter().all(|r| r.residual < RESIDUAL_GATE);
    Ok(ApproxOutcome {
        report: ApproxReport {
            mode: C::MODE,
            inputs: InputsEcho {
                t: DistributionJson::from_distribution(t),
                s: DistributionJson::from_distribution(s),
            },
            seed: cfg.seed,
            stage1: stage1_report,
            stage2,
            residual_gate: RESIDUAL_GATE,
            passed,
        },
        quadruples,
    })
}

/// Stage 1 (mollify and sample, skipped for comb inputs) followed by
/// stage 2 for every `k`.
pub fn approx(t: &AnyDistribution, s: &AnyDistribution, cfg: &ApproxConfig) -> Result<ApproxOutcome> {
    match (t, s) {
        (AnyDistribution::Exact(a), AnyDistribution::Exact(b)) => approx_typed(a, b, cfg),
        (AnyDistribution::Float(a), AnyDistribution::Float(b)) => approx_typed(a, b, cfg),
        _ => Err(Error::ModeMismatch {
            left: t.mode(),
            right: s.mode(),
        }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleStepReport {
    pub m: u64,
    pub n: u64,
    pub weak_error: f64,
    pub mollify_error: f64,
    pub riemann_error: f64,
    pub comb: DistributionJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleReport {
    pub input: DistributionJson,
    pub support_index: i64,
    pub min_mollifier_index: u64,
    pub steps: Vec<SampleStepReport>,
}

/// Default schedule length for the `sample` command.
pub const SAMPLE_STEPS: usize = 3;

pub fn sample(
    t: &AnyDistribution,
    k: Option<i64>,
    schedule: Option<&[(u64, u64)]>,
    battery: &[TestFunction],
    spec: &BumpSpec,
) -> Result<(SampleReport, Vec<SampleStep>)> {
    let tf = t.to_float();
    let k = k.unwrap_or_else(|| support_index(&tf));
    let m_min = minimal_index(&tf, k, spec)?;
    let schedule = match schedule {
        Some(s) if s.is_empty() => return Err(Error::InvalidArgument("sampling schedule is empty".into())),
        Some(s) => s.to_vec(),
        None => default_schedule(m_min, k, SAMPLE_STEPS),
    };
    let steps = comb_sequence(&tf, k, &schedule, spec, battery)?;
    let report = SampleReport {
        input: t.to_json(),
        support_index: k,
        min_mollifier_index: m_min,
        steps: steps
            .iter()
            .map(|s| SampleStepReport {
                m: s.m,
                n: s.n,
                weak_error: s.weak_error(),
                mollify_error: s.mollify_error(),
                riemann_error: s.riemann_error(),
                comb: DistributionJson::from_distribution(&s.comb.to_distribution()),
            })
            .collect(),
    };
    Ok((report, steps))
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformReport {
    pub certificate: PwCertificate,
    pub grid: GridSpec,
    pub grid_min: ZeroDiagnosis,
}

pub fn transform(t: &AnyDistribution, grid: &GridSpec) -> Result<TransformReport> {
    let (certificate, grid_min) = match t {
        AnyDistribution::Exact(d) => (pw_constants(d)?, detect_zero(d, grid)),
        AnyDistribution::Float(d) => (pw_constants(d)?, detect_zero(d, grid)),
    };
    Ok(TransformReport {
        certificate,
        grid: *grid,
        grid_min,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvertReport {
    pub invertible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse: Option<DistributionJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn invert_typed<C: Scalar>(d: &Distribution<C>) -> InvertReport {
    match d.invert() {
        Inverse::Invertible(inv) => InvertReport {
            invertible: true,
            inverse: Some(DistributionJson::from_distribution(&inv)),
            reason: None,
        },
        Inverse::NotInvertible => InvertReport {
            invertible: false,
            inverse: None,
            reason: Some(if d.is_zero() {
                "zero distribution".into()
            } else if d.len() > 1 {
                "support hull is not a single point".into()
            } else {
                "derivative of a point mass".into()
            }),
        },
    }
}

pub fn invert(t: &AnyDistribution) -> InvertReport {
    match t {
        AnyDistribution::Exact(d) => invert_typed(d),
        AnyDistribution::Float(d) => invert_typed(d),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub mode: ScalarMode,
    /// `max |coeff| of T∗U + S∗V − δ_0`.
    pub residual: f64,
    /// `max |T̂Û + ŜV̂ − 1|` on the disk points of `grid`.
    pub transform_residual: f64,
    pub grid: GridSpec,
    pub residual_gate: f64,
    pub passed: bool,
}

fn verify_typed<C: CofactorField>(parts: [&Distribution<C>; 4], grid: &GridSpec) -> VerifyReport {
    let [t, s, u, v] = parts;
    let residual = crate::bezout::bezout_residual(t, s, u, v);
    VerifyReport {
        mode: C::MODE,
        residual,
        transform_residual: transform_bezout_residual(t, s, u, v, grid),
        grid: *grid,
        residual_gate: RESIDUAL_GATE,
        passed: residual < RESIDUAL_GATE,
    }
}

pub fn verify(quad: &QuadrupleJson, grid: &GridSpec) -> Result<VerifyReport> {
    let parts = quad.parts()?;
    Ok(match quad.t.mode {
        ScalarMode::Exact => {
            let p: Vec<&Distribution<GaussianRational>> =
                parts.iter().map(|d| d.exact()).collect::<Result<_>>()?;
            verify_typed([p[0], p[1], p[2], p[3]], grid)
        }
        ScalarMode::Float => {
            let p: Vec<&Distribution<Complex64>> = parts.iter().map(|d| d.float()).collect::<Result<_>>()?;
            verify_typed([p[0], p[1], p[2], p[3]], grid)
        }
    })
}
