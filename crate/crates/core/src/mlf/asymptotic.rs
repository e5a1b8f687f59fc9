//! Algebraic expansion on the far negative axis.

use super::{MLArgument, MLConfig};
use crate::error::{domain, Result};
use crate::special::{cos_pi, recip_gamma, CompensatedSum};

/// `E_{μ,γ}(z) ≈ -Σ_{k=1}^{h} z^{-k} / Γ(γ - μk)` for `z < 0`, `h = cfg.asym_terms`.
pub fn ml_asymptotic(arg: &MLArgument, cfg: &MLConfig) -> Result<f64> {
    arg.validate()?;
    cfg.validate()?;
    let MLArgument { mu, gamma, z } = *arg;
    if z >= 0.0 {
        return Err(domain(format!("asymptotic expansion needs z < 0, got {z}")));
    }
    let inv = 1.0 / z;
    let mut pow = 1.0;
    let mut acc = CompensatedSum::new();
    for k in 1..=cfg.asym_terms {
        pow *= inv;
        acc.add(-pow * recip_gamma(gamma - mu * k as f64));
    }
    Ok(acc.value())
}

/// Estimated error of the `h`-term expansion at `z = -x`.
///
/// Twice the sum of the next four omitted terms (single terms can vanish at
/// poles of Γ), plus for `μ > 2/3` twice the exponentially small contribution
/// `x^{(1-γ)/μ} exp(x^{1/μ} cos(π/μ)) / μ` of the two complex poles.
pub fn asymptotic_remainder(mu: f64, gamma: f64, x: f64, h: usize) -> f64 {
    let x = x.abs();
    let next = |k: usize| x.powi(-(k as i32)) * recip_gamma(gamma - mu * k as f64).abs();
    let mut r = 2.0 * (h + 1..=h + 4).map(next).sum::<f64>();
    if mu > 2.0 / 3.0 {
        let r_mu = x.powf(1.0 / mu);
        r += 2.0 * (x.ln() * (1.0 - gamma) / mu + r_mu * cos_pi(1.0 / mu)).exp() / mu;
    }
    r
}
