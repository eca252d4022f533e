//! The transform of (δ₋₁ − δ₁)/(2i) is sin 2πz: zeros on the unit disk, no inverse.

use dirac_bezout::distr::{Distribution, Inverse};
use dirac_bezout::transform::{detect_zero, fl_eval, pw_constants, GridSpec};
use dirac_bezout::{GaussianRational as Q, Scalar};
use num_complex::Complex64;

fn main() -> dirac_bezout::Result<()> {
    let half_i = Q::i().inv().unwrap() * Q::ratio(1, 2);
    let d = Distribution::canonicalize([
        dirac_bezout::distr::PointTerm::new(half_i.clone(), (-1).into(), 0),
        dirac_bezout::distr::PointTerm::new(-half_i, 1.into(), 0),
    ]);
    println!("D = {d}");
    for z in [0.25, 0.1, -0.4] {
        let z = Complex64::new(z, 0.3);
        println!("D^({z:.2}) = {:.10}, sin 2 pi z = {:.10}", fl_eval(&d, z), (2.0 * std::f64::consts::PI * z).sin());
    }
    let cert = pw_constants(&d)?;
    println!("growth: C = {}, M = {}, R = {:.6}, valid = {}", cert.c, cert.m, cert.r, cert.is_valid());
    let zero = detect_zero(&d, &GridSpec::unit_disk(201));
    println!("unit disk: {zero:?}");
    println!("invertible: {}", matches!(d.invert(), Inverse::Invertible(_)));
    Ok(())
}
