//! Laurent polynomials, their roots, and the map onto Dirac combs.

use dirac_bezout::laurent::{phi, phi_inverse, roots, LaurentPoly};
use dirac_bezout::GaussianRational as Q;
use num_complex::Complex64;

fn main() -> dirac_bezout::Result<()> {
    let p = LaurentPoly::from_terms([(-1, Q::ratio(1, 1)), (1, Q::ratio(-1, 1))]);
    let q = LaurentPoly::from_terms([(0, Q::ratio(1, 2)), (2, Q::ratio(1, 1))]);
    let n = 3;
    let lhs = phi(&(&p * &q), n).to_distribution();
    let rhs = &phi(&p, n).to_distribution() * &phi(&q, n).to_distribution();
    println!("Phi(p q)       = {lhs}");
    println!("Phi(p) * Phi(q) = {rhs}");
    println!("agree: {}", lhs == rhs);
    println!("round trip: {}", phi_inverse(&phi(&p, n)) == p);

    let cubic = LaurentPoly::from_terms([(0, Complex64::new(-1.0, 0.0)), (3, Complex64::new(1.0, 0.0))]);
    let found = roots(&cubic, 1e-12)?;
    for r in &found.roots {
        println!("root {:.12} (|root| = {:.3})", r, r.norm());
    }
    Ok(())
}
