//! Mollify a distribution with derivatives and sample it into Dirac combs.

use dirac_bezout::distr::{Distribution, RationalPoint};
use dirac_bezout::mollify::{comb_sequence, default_schedule, minimal_index, standard_battery, BumpSpec};
use dirac_bezout::GaussianRational as Q;

fn main() -> dirac_bezout::Result<()> {
    let t: Distribution<Q> = &Distribution::term(Q::ratio(1, 1), RationalPoint::new(1, 2)?, 1)
        + &Distribution::term(Q::ratio(3, 1), RationalPoint::new(-1, 4)?, 0);
    let k = 1;
    let spec = BumpSpec::default();
    let m = minimal_index(&t, k, &spec)?;
    println!("T = {t}, minimal mollifier index {m}");
    let steps = comb_sequence(&t, k, &default_schedule(m, k, 4), &spec, &standard_battery())?;
    println!("{:>4} {:>6} {:>8} {:>12} {:>12} {:>12}", "m", "n", "terms", "weak", "mollify", "riemann");
    for s in &steps {
        println!(
            "{:>4} {:>6} {:>8} {:>12.4e} {:>12.4e} {:>12.4e}",
            s.m,
            s.n,
            s.comb.len(),
            s.weak_error(),
            s.mollify_error(),
            s.riemann_error()
        );
    }
    Ok(())
}
