//! Convolution of point distributions, supports and inverses.

use dirac_bezout::distr::{Distribution, Inverse, RationalPoint};
use dirac_bezout::mollify::TestFunction;
use dirac_bezout::GaussianRational as Q;

fn main() -> dirac_bezout::Result<()> {
    let half = RationalPoint::new(1, 2)?;
    let a: Distribution<Q> = &Distribution::delta(half) + &Distribution::term(Q::ratio(3, 1), RationalPoint::new(-1, 4)?, 1);
    let b = &Distribution::delta((-1).into()) - &Distribution::delta(1.into());
    let ab = &a * &b;
    println!("A     = {a}");
    println!("B     = {b}");
    println!("A * B = {ab}");
    if let Some((lo, hi)) = ab.support_hull().bounds() {
        println!("hull(A * B) = [{lo}, {hi}]");
    }

    let psi = TestFunction::bump(0.0, 3.0);
    println!("<A * B, bump> = {:.6}", ab.pair(&psi)?);

    let two_at_three = Distribution::term(Q::ratio(2, 1), 3.into(), 0);
    match two_at_three.invert() {
        Inverse::Invertible(inv) => println!("inverse of {two_at_three} is {inv}"),
        Inverse::NotInvertible => unreachable!(),
    }
    println!("B invertible: {}", matches!(b.invert(), Inverse::Invertible(_)));
    Ok(())
}
