//! Both stages end to end: sample (T, S) into combs, then make the pair unimodular.

use dirac_bezout::json::{AnyDistribution, DistributionJson};
use dirac_bezout::pipeline::{approx, ApproxConfig};
use dirac_bezout::distr::{Distribution, RationalPoint};
use dirac_bezout::GaussianRational as Q;

fn main() -> dirac_bezout::Result<()> {
    let t: Distribution<Q> = &Distribution::term(Q::ratio(1, 1), RationalPoint::new(1, 2)?, 1)
        + &Distribution::term(Q::ratio(3, 1), RationalPoint::new(-1, 4)?, 0);
    let s = Distribution::term(Q::ratio(2, 1), RationalPoint::ZERO, 0);
    let any = |d: &Distribution<Q>| AnyDistribution::from_json(&DistributionJson::from_distribution(d));
    let out = approx(&any(&t)?, &any(&s)?, &ApproxConfig { max_k: 5, ..Default::default() })?;
    if let Some(stage1) = &out.report.stage1 {
        for step in &stage1.steps {
            println!("stage 1: m = {}, n = {}, weak error (T) = {:.4e}", step.m, step.n, step.weak_error_t);
        }
    }
    for row in &out.report.stage2 {
        let worst = row.weak_errors.iter().map(|w| w.stage2_t.max(w.stage2_s)).fold(0.0, f64::max);
        let total = row.weak_errors.iter().map(|w| w.total_t.max(w.total_s)).fold(0.0, f64::max);
        println!(
            "stage 2: k = {}, residual = {:.1e}, stage-2 weak error = {:.4e}, total = {:.4e}",
            row.k, row.residual, worst, total
        );
    }
    println!("passed: {}", out.report.passed);
    Ok(())
}
