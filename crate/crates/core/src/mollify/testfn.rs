//! Analytic test functions with exact derivative evaluation.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bump::unit_bump;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TestFamily {
    /// `e · exp(−1/(1−((x−c)/w)²))`, peak value 1 at `c`.
    Bump { center: f64, half_width: f64 },
    /// `p(x) · bump(x)`; `poly` holds ascending coefficients.
    PolyBump {
        poly: Vec<f64>,
        center: f64,
        half_width: f64,
    },
    /// `cos(ωx + θ) · bump(x)`.
    TrigBump {
        freq: f64,
        phase: f64,
        center: f64,
        half_width: f64,
    },
    /// Ascending coefficients. Not compactly supported.
    Polynomial { coeffs: Vec<f64> },
    /// `exp(rate · x)` for complex `rate`. Not compactly supported.
    Exponential { rate_re: f64, rate_im: f64 },
}

/// A test function `x ↦ ψ(x + shift)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    #[serde(flatten)]
    pub family: TestFamily,
    #[serde(default)]
    pub shift: f64,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn poly_derivative(coeffs: &[f64], x: f64, r: u32) -> f64 {
    let r = r as usize;
    coeffs
        .iter()
        .enumerate()
        .skip(r)
        .rev()
        .fold(0.0, |acc, (i, &c)| {
            let falling = ((i - r + 1)..=i).fold(1.0, |p, j| p * j as f64);
            acc * x + c * falling
        })
}

fn scaled_bump(x: f64, center: f64, half_width: f64, r: u32) -> Result<f64> {
    Ok(std::f64::consts::E * half_width.powi(-(r as i32)) * unit_bump((x - center) / half_width, r)?)
}

impl TestFunction {
    pub fn new(family: TestFamily) -> Self {
        Self { family, shift: 0.0 }
    }

    pub fn bump(center: f64, half_width: f64) -> Self {
        Self::new(TestFamily::Bump { center, half_width })
    }

    pub fn poly_bump(poly: Vec<f64>, center: f64, half_width: f64) -> Self {
        Self::new(TestFamily::PolyBump {
            poly,
            center,
            half_width,
        })
    }

    pub fn trig_bump(freq: f64, phase: f64, center: f64, half_width: f64) -> Self {
        Self::new(TestFamily::TrigBump {
            freq,
            phase,
            center,
            half_width,
        })
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Self::new(TestFamily::Polynomial { coeffs })
    }

    pub fn constant(c: f64) -> Self {
        Self::polynomial(vec![c])
    }

    pub fn exponential(rate: Complex64) -> Self {
        Self::new(TestFamily::Exponential {
            rate_re: rate.re,
            rate_im: rate.im,
        })
    }

    /// The Fourier–Laplace kernel `x ↦ exp(−2πixz)`.
    pub fn fourier_kernel(z: Complex64) -> Self {
        Self::exponential(Complex64::new(0.0, -2.0 * std::f64::consts::PI) * z)
    }

    /// `x ↦ self(x + by)`.
    pub fn shifted(&self, by: f64) -> Self {
        Self {
            family: self.family.clone(),
            shift: self.shift + by,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            TestFamily::Bump { .. } => "bump",
            TestFamily::PolyBump { .. } => "poly_bump",
            TestFamily::TrigBump { .. } => "trig_bump",
            TestFamily::Polynomial { .. } => "polynomial",
            TestFamily::Exponential { .. } => "exponential",
        }
    }

    /// Support interval, `None` when not compactly supported.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self.family {
            TestFamily::Bump {
                center, half_width, ..
            }
            | TestFamily::PolyBump {
                center, half_width, ..
            }
            | TestFamily::TrigBump {
                center, half_width, ..
            } => Some((
                center - half_width - self.shift,
                center + half_width - self.shift,
            )),
            _ => None,
        }
    }

    pub fn value(&self, x: f64) -> Complex64 {
        self.derivative(x, 0)
            .expect("order 0 is supported by every family")
    }

    /// `ψ^{(r)}(x)`.
    pub fn derivative(&self, x: f64, r: u32) -> Result<Complex64> {
        let y = x + self.shift;
        let real = |v: f64| Complex64::new(v, 0.0);
        match &self.family {
            TestFamily::Bump { center, half_width } => {
                scaled_bump(y, *center, *half_width, r).map(real)
            }
            TestFamily::PolyBump {
                poly,
                center,
                half_width,
            } => {
                let mut acc = 0.0;
                for j in 0..=r {
                    let pj = poly_derivative(poly, y, j);
                    if pj != 0.0 {
                        acc += binomial(r, j) * pj * scaled_bump(y, *center, *half_width, r - j)?;
                    }
                }
                Ok(real(acc))
            }
            TestFamily::TrigBump {
                freq,
                phase,
                center,
                half_width,
            } => {
                let mut acc = 0.0;
                for j in 0..=r {
                    let gj = freq.powi(j as i32) * (freq * y + phase + j as f64 * FRAC_PI_2).cos();
                    acc += binomial(r, j) * gj * scaled_bump(y, *center, *half_width, r - j)?;
                }
                Ok(real(acc))
            }
            TestFamily::Polynomial { coeffs } => Ok(real(poly_derivative(coeffs, y, r))),
            TestFamily::Exponential { rate_re, rate_im } => {
                let rate = Complex64::new(*rate_re, *rate_im);
                Ok(rate.powu(r) * (rate * y).exp())
            }
        }
    }

    /// Largest `|ψ|` over `samples` equispaced points of `[lo, hi]` plus `extra`.
    /// Never exceeds the true supremum on the interval.
    pub fn sampled_sup(&self, lo: f64, hi: f64, samples: usize, extra: &[f64]) -> f64 {
        let samples = samples.max(2);
        let step = (hi - lo) / (samples - 1) as f64;
        (0..samples)
            .map(|i| lo + step * i as f64)
            .chain(extra.iter().copied().filter(|x| *x >= lo && *x <= hi))
            .map(|x| self.value(x).norm())
            .fold(0.0, f64::max)
    }
}

/// Twelve fixed compactly supported test functions: plain, shifted and
/// scaled bumps, polynomial and trigonometric modulations. Supports reach
/// `|x| ≤ 12` so wide comb pairs are still probed.
pub fn standard_battery() -> Vec<TestFunction> {
    vec![
        TestFunction::bump(0.0, 1.5),
        TestFunction::bump(0.5, 1.0),
        TestFunction::bump(-0.75, 1.25),
        TestFunction::bump(0.0, 12.0),
        TestFunction::bump(3.0, 8.0),
        TestFunction::poly_bump(vec![1.0, 1.0], 0.0, 3.0),
        TestFunction::poly_bump(vec![0.0, 0.0, 2.0], 0.25, 2.0),
        TestFunction::poly_bump(vec![1.0, -0.5, 0.1], -1.0, 11.0),
        TestFunction::trig_bump(3.0, 0.0, 0.0, 2.0),
        TestFunction::trig_bump(5.0, 0.3, -0.5, 2.5),
        TestFunction::trig_bump(1.5, 0.7, 0.0, 12.0),
        TestFunction::trig_bump(0.8, -0.4, 2.0, 10.0),
    ]
}
