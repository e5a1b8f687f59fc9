//! One- and two-parameter Mittag-Leffler functions on the real line.
//!
//! `E_{μ,γ}(z) = Σ_{k≥0} z^k / Γ(μk + γ)`, with `E_μ = E_{μ,1}`.
//!
//! [`ml_eval`] picks one of three evaluation routes:
//!
//! * **series** — the defining power series with compensated summation, used
//!   while it is well conditioned (`|z|^{1/μ} ≤ 4` on the negative axis) and
//!   for positive arguments;
//! * **asymptotic** — the algebraic expansion
//!   `-Σ_{k=1}^{h} z^{-k} / Γ(γ - μk)` on the far negative axis, once
//!   `|z| ≥ asym_switch` *and* the estimated remainder is below `series_tol`;
//! * **integral** — a Laplace-inversion integral along the branch cut for the
//!   gap in between, where the alternating series cancels catastrophically and
//!   the truncated expansion is not yet accurate.
//!
//! The validated envelope is `0 < μ ≤ 1`. For `1 < μ < 2` only the series and
//! asymptotic routes are available and arguments falling between them are
//! rejected.

mod asymptotic;
mod integral;
mod series;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::special::recip_gamma;

pub use asymptotic::{asymptotic_remainder, ml_asymptotic};
pub use integral::ml_integral;
pub use series::ml_series;

/// `|z|^{1/μ}` up to which the alternating series is trusted on the negative axis.
///
/// The largest term is then about `e^4 / μ` times the O(1) result, so at most
/// three digits are lost to cancellation.
pub const SERIES_CONDITION_LIMIT: f64 = 4.0;

/// Multiplier on `max_terms` for positive arguments, where all terms share a sign.
pub const POSITIVE_TERM_FACTOR: usize = 40;

/// Parameters and argument of `E_{μ,γ}(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MLArgument {
    pub mu: f64,
    pub gamma: f64,
    pub z: f64,
}

impl MLArgument {
    pub fn new(mu: f64, gamma: f64, z: f64) -> Result<Self> {
        let arg = Self { mu, gamma, z };
        arg.validate()?;
        Ok(arg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu < 2.0) {
            return Err(Error::Domain(format!(
                "mu must lie in (0, 2), got {}",
                self.mu
            )));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Domain(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !self.z.is_finite() {
            return Err(Error::Domain(format!("z must be finite, got {}", self.z)));
        }
        Ok(())
    }
}

/// Evaluation policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MLConfig {
    /// Truncation tolerance, relative to `max(1, |partial sum|)`.
    pub series_tol: f64,
    /// Term cap for the series on the negative axis.
    pub max_terms: usize,
    /// Smallest `|z|` at which the asymptotic expansion may be used.
    pub asym_switch: f64,
    /// Number of terms `h` of the asymptotic expansion.
    pub asym_terms: usize,
}

impl Default for MLConfig {
    fn default() -> Self {
        Self {
            series_tol: 1e-12,
            max_terms: 500,
            asym_switch: 15.0,
            asym_terms: 6,
        }
    }
}

impl MLConfig {
    pub fn validate(&self) -> Result<()> {
        if self.series_tol.is_nan() || self.series_tol <= 0.0 {
            return Err(Error::InvalidConfig("series_tol must be positive".into()));
        }
        if self.max_terms < 1 {
            return Err(Error::InvalidConfig("max_terms must be at least 1".into()));
        }
        if self.asym_switch.is_nan() || self.asym_switch <= 0.0 {
            return Err(Error::InvalidConfig("asym_switch must be positive".into()));
        }
        if self.asym_terms < 1 {
            return Err(Error::InvalidConfig("asym_terms must be at least 1".into()));
        }
        Ok(())
    }
}

/// Evaluation route chosen by [`ml_eval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Series,
    Asymptotic,
    Integral,
}

/// Route [`ml_eval`] would take for `arg` (before any series fallback).
pub fn regime(arg: &MLArgument, cfg: &MLConfig) -> Regime {
    let MLArgument { mu, gamma, z } = *arg;
    if z >= 0.0 {
        return Regime::Series;
    }
    let x = -z;
    if x >= cfg.asym_switch && asymptotic_remainder(mu, gamma, x, cfg.asym_terms) <= cfg.series_tol
    {
        return Regime::Asymptotic;
    }
    if x.powf(1.0 / mu) <= SERIES_CONDITION_LIMIT || mu > 1.0 {
        Regime::Series
    } else {
        Regime::Integral
    }
}

/// `E_{μ,γ}(z)` for real `z`.
pub fn ml_eval(arg: &MLArgument, cfg: &MLConfig) -> Result<f64> {
    arg.validate()?;
    cfg.validate()?;
    let MLArgument { mu, gamma, z } = *arg;
    if z == 0.0 {
        return Ok(recip_gamma(gamma));
    }
    if z > 0.0 {
        if mu <= 1.0 && z.powf(1.0 / mu) > 700.0 {
            // Dominated by (1/μ) z^{(1-γ)/μ} exp(z^{1/μ}); past f64 range.
            let log_dom = (1.0 - gamma) / mu * z.ln() + z.powf(1.0 / mu) - mu.ln();
            if log_dom > f64::MAX.ln() {
                return Ok(f64::INFINITY);
            }
        }
        let budget = cfg.max_terms.saturating_mul(POSITIVE_TERM_FACTOR);
        return match series::series_sum(mu, gamma, z, cfg.series_tol, budget) {
            Ok(v) => Ok(v),
            Err(Error::NonConvergence { .. }) if mu < 1.0 => ml_integral(arg),
            Err(e) => Err(e),
        };
    }
    match regime(arg, cfg) {
        Regime::Asymptotic => ml_asymptotic(arg, cfg),
        Regime::Series => match ml_series(arg, cfg) {
            Ok(v) => Ok(v),
            Err(Error::NonConvergence { .. }) if mu <= 1.0 => ml_integral(arg),
            Err(e) => Err(e),
        },
        Regime::Integral => ml_integral(arg),
    }
}

/// `E_{μ,γ}(z)` with the default [`MLConfig`].
pub fn mittag_leffler(mu: f64, gamma: f64, z: f64) -> Result<f64> {
    ml_eval(&MLArgument::new(mu, gamma, z)?, &MLConfig::default())
}
