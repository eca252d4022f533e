//! The standard bump `exp(−1/(1−x²))` and its exact derivatives.
//!
//! On `|x| < 1`, `φ^{(r)}(x) = P_r(x) / (1−x²)^{2r} · φ(x)` where the
//! polynomials satisfy `P_0 = 1` and
//! `P_{r+1} = P_r'·(1−x²)² + 4r·x·(1−x²)·P_r − 2x·P_r`.

use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deepest derivative the recurrence table provides.
pub const MAX_DERIVATIVE_ORDER: u32 = 12;

/// `∫_{−1}^{1} exp(−1/(1−x²)) dx`.
pub const BUMP_MASS: f64 = 0.443_993_816_168_079_44;

fn recurrence_table() -> &'static [Vec<f64>] {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = vec![vec![1.0]];
        for r in 0..MAX_DERIVATIVE_ORDER as usize {
            let p = &table[r];
            let mut next = vec![0.0; p.len() + 3];
            // P' · (1 − 2x² + x⁴)
            for (i, &c) in p.iter().enumerate().skip(1) {
                let d = c * i as f64;
                next[i - 1] += d;
                next[i + 1] -= 2.0 * d;
                next[i + 3] += d;
            }
            // (4r·x·(1−x²) − 2x) · P
            let r4 = 4.0 * r as f64;
            for (i, &c) in p.iter().enumerate() {
                next[i + 1] += (r4 - 2.0) * c;
                next[i + 3] -= r4 * c;
            }
            while next.len() > 1 && next.last() == Some(&0.0) {
                next.pop();
            }
            table.push(next);
        }
        table
    })
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `d^r/dx^r exp(−1/(1−x²))`, zero outside `(−1, 1)`.
pub fn unit_bump(x: f64, r: u32) -> Result<f64> {
    if r > MAX_DERIVATIVE_ORDER {
        return Err(Error::DerivativeOrder {
            family: "bump",
            order: r,
            cap: MAX_DERIVATIVE_ORDER,
        });
    }
    let w = 1.0 - x * x;
    if w <= 0.0 {
        return Ok(0.0);
    }
    let p = &recurrence_table()[r as usize];
    let log_tail = -1.0 / w - 2.0 * r as f64 * w.ln();
    Ok(horner(p, x) * log_tail.exp())
}

/// Mollifier `c_φ · exp(−1/(1−(x/a)²))` on `[−a, a]` with unit integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    #[serde(with = "ratio_pair")]
    half_width: Rational64,
    normalization: f64,
}

impl Default for BumpSpec {
    fn default() -> Self {
        Self::new(Rational64::from_integer(1)).expect("unit half-width")
    }
}

impl BumpSpec {
    pub fn new(half_width: Rational64) -> Result<Self> {
        let a = half_width.to_f64().unwrap_or(0.0);
        if a <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "bump half-width must be positive, got {half_width}"
            )));
        }
        Ok(Self {
            half_width,
            normalization: 1.0 / (a * BUMP_MASS),
        })
    }

    pub fn half_width(&self) -> Rational64 {
        self.half_width
    }

    pub fn half_width_f64(&self) -> f64 {
        self.half_width.to_f64().unwrap_or(f64::NAN)
    }

    /// `c_φ`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `φ^{(r)}(x)` for the normalized mollifier.
    pub fn eval(&self, x: f64, r: u32) -> Result<f64> {
        let a = self.half_width_f64();
        Ok(self.normalization * a.powi(-(r as i32)) * unit_bump(x / a, r)?)
    }
}

/// `bump_eval(spec, x, r)`.
pub fn bump_eval(spec: &BumpSpec, x: f64, r: u32) -> Result<f64> {
    spec.eval(x, r)
}

mod ratio_pair {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Pair {
        num: i64,
        den: i64,
    }

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        Pair {
            num: *r.numer(),
            den: *r.denom(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let p = Pair::deserialize(d)?;
        if p.den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational64::new(p.num, p.den))
    }
}
