//! Gamma-function helpers and compensated summation.

use std::f64::consts::PI;

/// Largest argument for which `libm::tgamma` stays finite.
const GAMMA_OVERFLOW: f64 = 171.0;

/// `sin(pi * x)` with the argument reduced exactly, so integer `x` gives `0.0`.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // sin(pi x) has period 2; reduce to [-1, 1] then fold to [-0.5, 0.5].
    let mut r = x % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// `cos(pi * x)` with exact zeros at half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// Reciprocal gamma function `1/Γ(x)`.
///
/// Entire: the poles of `Γ` at `0, -1, -2, ...` map to an exact `0.0`. For
/// large positive arguments the value is formed from `ln Γ` and underflows
/// gracefully to zero.
pub fn recip_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x < 0.5 {
        // Reflection: 1/Γ(x) = sin(πx) Γ(1-x) / π.
        let s = sin_pi(x);
        let one_minus = 1.0 - x;
        if one_minus < GAMMA_OVERFLOW {
            return s * libm::tgamma(one_minus) / PI;
        }
        let (lg, _) = libm::lgamma_r(one_minus);
        return s / PI * lg.exp();
    }
    if x < GAMMA_OVERFLOW {
        return 1.0 / libm::tgamma(x);
    }
    (-libm::lgamma_r(x).0).exp()
}

/// `ln |Γ(x)|` together with the sign of `Γ(x)`.
pub fn ln_gamma(x: f64) -> (f64, f64) {
    let (v, s) = libm::lgamma_r(x);
    (v, if s < 0 { -1.0 } else { 1.0 })
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
