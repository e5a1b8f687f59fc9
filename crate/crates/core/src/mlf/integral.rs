//! Integral route along the branch cut, for `0 < μ ≤ 1`.
//!
//! For `0 < μ < 1`, `γ < 1 + μ` and real `z ≠ 0`,
//!
//! ```text
//! E_{μ,γ}(z) = 1/(πμ) ∫_0^∞ χ^{(1-γ)/μ} e^{-χ^{1/μ}}
//!              · (χ sin(π(1-γ)) - z sin(π(1-γ+μ))) / (χ² - 2χz cos(πμ) + z²) dχ
//!              [+ (1/μ) z^{(1-γ)/μ} e^{z^{1/μ}} when z > 0].
//! ```
//!
//! From `γ ≥ 1 + μ/2` on, `γ` is reduced with
//! `E_{μ,γ}(z) = (E_{μ,γ-μ}(z) - 1/Γ(γ-μ)) / z`, which keeps the endpoint
//! singularity `χ^{(1-γ)/μ}` no stronger than `χ^{-1/2}`. The division costs
//! about `log10(1/|z|)` digits for small `|z|`.
//! For `μ = 1` and `γ ≥ 3/2`,
//! `E_{1,γ}(z) = 1/Γ(γ-1) ∫_0^1 e^{z(1-v)} v^{γ-2} dv`, and smaller `γ` is
//! raised with `E_{1,γ}(z) = z E_{1,γ+1}(z) + 1/Γ(γ)`.

use super::MLArgument;
use crate::error::{domain, Error, Result};
use crate::quad;
use crate::special::{cos_pi, recip_gamma, sin_pi, CompensatedSum};

const QUAD_TOL: f64 = 1e-15;
const QUAD_MAX_LEVEL: u32 = 12;
/// The integrand is cut where `χ^{1/μ}` reaches this value (`e^{-80}` below the peak).
const EXP_CUTOFF: f64 = 80.0;

/// `E_{μ,γ}(z)` from the integral representation; `0 < μ ≤ 1` only.
pub fn ml_integral(arg: &MLArgument) -> Result<f64> {
    arg.validate()?;
    let MLArgument { mu, gamma, z } = *arg;
    if mu > 1.0 {
        return Err(domain(format!("integral route needs mu <= 1, got {mu}")));
    }
    if z == 0.0 {
        return Ok(recip_gamma(gamma));
    }
    if mu == 1.0 {
        return unit_order(gamma, z);
    }
    if gamma >= 1.0 + 0.5 * mu {
        let inner = ml_integral(&MLArgument {
            mu,
            gamma: gamma - mu,
            z,
        })?;
        return Ok((inner - recip_gamma(gamma - mu)) / z);
    }
    let mut v = cut_integral(mu, gamma, z)?;
    if z > 0.0 {
        v += (z.ln() * (1.0 - gamma) / mu + z.powf(1.0 / mu)).exp() / mu;
    }
    Ok(v)
}

fn cut_integral(mu: f64, gamma: f64, z: f64) -> Result<f64> {
    let a = (1.0 - gamma) / mu;
    let s1 = sin_pi(1.0 - gamma);
    let s2 = sin_pi(1.0 - gamma + mu);
    let c = cos_pi(mu);
    let inv_mu = 1.0 / mu;
    let chi_max = EXP_CUTOFF.powf(mu);

    let rest = |chi: f64| -> f64 {
        let num = chi * s1 - z * s2;
        let den = chi * chi - 2.0 * chi * z * c + z * z;
        (-chi.powf(inv_mu)).exp() * num / den
    };
    let f = |chi: f64| chi.powf(a) * rest(chi);

    // breakpoints: the denominator's minimum, |z|, and the drop of e^{-χ^{1/μ}}
    let mut cuts = vec![0.0];
    for p in [z * c, z.abs(), 1.0] {
        if p > 0.0 && p < chi_max {
            cuts.push(p);
        }
    }
    cuts.push(chi_max);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();

    let mut acc = CompensatedSum::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let r = if lo == 0.0 && a < 0.0 {
            // χ = s^m with m(1 + a) = 1 removes the χ^a endpoint singularity
            let m = 1.0 / (1.0 + a);
            quad::integrate(
                |_, ds, _| m * rest(ds.powf(m)),
                0.0,
                hi.powf(1.0 / m),
                QUAD_TOL,
                QUAD_MAX_LEVEL,
            )
        } else {
            quad::integrate(
                |x, da, _| f(if lo == 0.0 { da } else { x }),
                lo,
                hi,
                QUAD_TOL,
                QUAD_MAX_LEVEL,
            )
        };
        // a strict tolerance may stall at rounding level; only non-finite sums are fatal
        if !r.value.is_finite() {
            return Err(Error::NonConvergence {
                terms: r.level as usize,
                last_term: r.value,
            });
        }
        acc.add(r.value);
    }
    Ok(acc.value() / (std::f64::consts::PI * mu))
}

fn unit_order(gamma: f64, z: f64) -> Result<f64> {
    if gamma < 1.5 {
        return Ok(z * unit_order(gamma + 1.0, z)? + recip_gamma(gamma));
    }
    let e = gamma - 2.0;
    let r = quad::integrate(
        |_, da, db| (z * db).exp() * da.powf(e),
        0.0,
        1.0,
        QUAD_TOL,
        QUAD_MAX_LEVEL,
    );
    if !r.value.is_finite() {
        return Err(Error::NonConvergence {
            terms: r.level as usize,
            last_term: r.value,
        });
    }
    Ok(r.value * recip_gamma(gamma - 1.0))
}
