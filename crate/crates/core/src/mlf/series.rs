//! Power-series route.

use super::{MLArgument, MLConfig};
use crate::error::{Error, Result};
use crate::special::{ln_gamma, recip_gamma, CompensatedSum};

/// Largest `k ln|z|` for which `z^k` is formed directly.
const DIRECT_POW_LIMIT: f64 = 650.0;
/// Above this, `1/Γ` is formed from `ln Γ`.
const DIRECT_GAMMA_LIMIT: f64 = 170.0;
/// Fraction of the tolerance granted to the estimated tail.
const TAIL_SHARE: f64 = 1.0 / 16.0;

/// `E_{μ,γ}(z)` by direct summation with `cfg.max_terms` terms at most.
///
/// Terms are summed with Neumaier compensation and the loop stops once the
/// terms are decreasing and the geometric tail estimate `|t_k| / (1 - r)`,
/// `r = |t_k / t_{k-1}|`, is below `series_tol · max(1, |partial sum|) / 16`.
pub fn ml_series(arg: &MLArgument, cfg: &MLConfig) -> Result<f64> {
    arg.validate()?;
    cfg.validate()?;
    series_sum(arg.mu, arg.gamma, arg.z, cfg.series_tol, cfg.max_terms)
}

#[inline]
fn term(mu: f64, gamma: f64, z: f64, ln_abs_z: f64, k: usize) -> f64 {
    let x = mu * k as f64 + gamma;
    let lm = k as f64 * ln_abs_z;
    if lm.abs() < DIRECT_POW_LIMIT && x < DIRECT_GAMMA_LIMIT {
        return z.powi(k as i32) * recip_gamma(x);
    }
    // x > 0 here, so Γ(x) > 0
    let (lg, _) = ln_gamma(x);
    let sign = if z < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    sign * (lm - lg).exp()
}

pub(crate) fn series_sum(mu: f64, gamma: f64, z: f64, tol: f64, max_terms: usize) -> Result<f64> {
    let first = recip_gamma(gamma);
    if z == 0.0 {
        return Ok(first);
    }
    let ln_abs_z = z.abs().ln();
    let mut acc = CompensatedSum::new();
    acc.add(first);
    let mut prev = first.abs();
    let mut last = first;
    for k in 1..max_terms {
        let t = term(mu, gamma, z, ln_abs_z, k);
        acc.add(t);
        last = t;
        let s = acc.value();
        if !s.is_finite() {
            return Ok(s);
        }
        let r = t.abs() / prev;
        if r < 1.0 && t.abs() / (1.0 - r) <= TAIL_SHARE * tol * s.abs().max(1.0) {
            return Ok(s);
        }
        prev = t.abs();
    }
    Err(Error::NonConvergence {
        terms: max_terms,
        last_term: last,
    })
}
