//! Perturb a comb pair with a common zero into a unimodular pair.

use dirac_bezout::bezout::{unimodular_approx_pair, PipelineOptions};
use dirac_bezout::distr::DiracComb;
use dirac_bezout::GaussianRational as Q;

fn main() -> dirac_bezout::Result<()> {
    // p_T = (z − 1)(z + 2) and p_S = (z − 1) z after centering, so both vanish at 1.
    let t = DiracComb::from_coeffs(2, [(-1, Q::ratio(-2, 1)), (0, Q::ratio(1, 1)), (1, Q::ratio(1, 1))]);
    let s = DiracComb::from_coeffs(2, [(0, Q::ratio(-1, 1)), (1, Q::ratio(1, 1))]);
    for k in 1..=4 {
        let q = unimodular_approx_pair(&t, &s, k, &PipelineOptions::default())?;
        println!(
            "k = {k}: eps = {:.4e}, distances = ({:.3e}, {:.3e}), residual = {}, cofactor degrees = {:?}",
            q.budget.epsilon, q.distances.0, q.distances.1, q.residual, q.cofactor_degrees
        );
        if k == 1 {
            println!("  U = {}", q.u.to_distribution());
            println!("  V = {}", q.v.to_distribution());
        }
    }
    Ok(())
}
