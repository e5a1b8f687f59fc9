//! Hilfer-fractional cobweb models and their closed-form price paths.
//!
//! Both models reduce to `D^{μ,ν} p(t) = λ p(t) + ξ` with
//! `(I^{(1-ν)(1-μ)} p)(0⁺) = C`, solved by
//!
//! ```text
//! p(t) = C t^{γ-1} E_{μ,γ}(λ t^μ) - ξ/λ + (ξ/λ) E_μ(λ t^μ),   γ = μ + ν - μν.
//! ```
//!
//! The demand-side model uses `λ = (β₁-β)/β`, `ξ = (α₁-α)/β`. Equating demand
//! with the supply-side model gives `ϱ = (β-β₁)/(δβ₁)`, `η = (α-α₁)/(δβ₁)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::mlf::{ml_eval, MLArgument, MLConfig};

/// Which of the two models a parameter set came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Demand,
    Supply,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Demand => "demand",
            ModelKind::Supply => "supply",
        })
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "demand" => Ok(ModelKind::Demand),
            "supply" => Ok(ModelKind::Supply),
            other => Err(domain(format!("unknown model kind '{other}'"))),
        }
    }
}

/// Demand `α + β p` against supply `α₁ + β₁ p`, with fractional dynamics on the demand side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandModel {
    pub alpha: f64,
    pub beta: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub mu: f64,
    pub nu: f64,
    /// `(I^{(1-ν)(1-μ)} p)(0⁺)`.
    pub c: f64,
}

/// Supply `α₁ + β₁ (p + δ D^{μ,ν} p)` against demand `α + β p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupplyModel {
    pub alpha: f64,
    pub beta: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub delta: f64,
    pub mu: f64,
    pub nu: f64,
    pub c: f64,
}

fn check_orders(mu: f64, nu: f64) -> Result<()> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(domain(format!("mu must lie in (0, 1], got {mu}")));
    }
    if !(0.0..=1.0).contains(&nu) {
        return Err(domain(format!("nu must lie in [0, 1], got {nu}")));
    }
    Ok(())
}

fn check_slopes(beta: f64, beta1: f64) -> Result<()> {
    if beta == 0.0 {
        return Err(Error::DegenerateModel("beta must be nonzero".into()));
    }
    if beta == beta1 {
        return Err(Error::DegenerateModel(
            "beta equals beta1, so lambda = 0".into(),
        ));
    }
    Ok(())
}

fn check_finite(values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        if !v.is_finite() {
            return Err(domain(format!("{name} must be finite, got {v}")));
        }
    }
    Ok(())
}

impl DemandModel {
    pub fn validate(&self) -> Result<()> {
        check_finite(&[
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("alpha1", self.alpha1),
            ("beta1", self.beta1),
            ("c", self.c),
        ])?;
        check_orders(self.mu, self.nu)?;
        check_slopes(self.beta, self.beta1)
    }
}

impl SupplyModel {
    pub fn validate(&self) -> Result<()> {
        check_finite(&[
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("alpha1", self.alpha1),
            ("beta1", self.beta1),
            ("delta", self.delta),
            ("c", self.c),
        ])?;
        check_orders(self.mu, self.nu)?;
        check_slopes(self.beta, self.beta1)?;
        if self.delta == 0.0 {
            return Err(Error::DegenerateModel("delta must be nonzero".into()));
        }
        if self.beta1 == 0.0 {
            return Err(Error::DegenerateModel(
                "beta1 must be nonzero in the supply model".into(),
            ));
        }
        Ok(())
    }
}

/// Either model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    Demand(DemandModel),
    Supply(SupplyModel),
}

impl Model {
    pub fn derive(&self) -> Result<DerivedParams> {
        match self {
            Model::Demand(m) => derive_demand(m),
            Model::Supply(m) => derive_supply(m),
        }
    }

    pub fn c(&self) -> f64 {
        match self {
            Model::Demand(m) => m.c,
            Model::Supply(m) => m.c,
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Demand(_) => ModelKind::Demand,
            Model::Supply(_) => ModelKind::Supply,
        }
    }

    /// Same coefficients with different fractional orders.
    pub fn with_orders(&self, mu: f64, nu: f64) -> Self {
        match *self {
            Model::Demand(m) => Model::Demand(DemandModel { mu, nu, ..m }),
            Model::Supply(m) => Model::Supply(SupplyModel { mu, nu, ..m }),
        }
    }
}

/// Coefficients of the reduced equation `D^{μ,ν} p = λ p + ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub model: ModelKind,
    pub mu: f64,
    pub nu: f64,
    /// `λ` (demand) or `ϱ` (supply).
    pub lam: f64,
    /// `ξ` (demand) or `η` (supply).
    pub xi: f64,
    pub gamma: f64,
    pub p_e: f64,
    /// `β₁/β < 1`.
    pub stable: bool,
}

/// `γ = μ + ν - μν`, in `(0, 1]` for admissible orders.
pub fn gamma_param(mu: f64, nu: f64) -> Result<f64> {
    check_orders(mu, nu)?;
    Ok((mu + nu - mu * nu).min(1.0))
}

fn equilibrium(alpha: f64, beta: f64, alpha1: f64, beta1: f64) -> f64 {
    (alpha1 - alpha) / (beta - beta1)
}

pub fn derive_demand(m: &DemandModel) -> Result<DerivedParams> {
    m.validate()?;
    Ok(DerivedParams {
        model: ModelKind::Demand,
        mu: m.mu,
        nu: m.nu,
        lam: (m.beta1 - m.beta) / m.beta,
        xi: (m.alpha1 - m.alpha) / m.beta,
        gamma: gamma_param(m.mu, m.nu)?,
        p_e: equilibrium(m.alpha, m.beta, m.alpha1, m.beta1),
        stable: m.beta1 / m.beta < 1.0,
    })
}

pub fn derive_supply(m: &SupplyModel) -> Result<DerivedParams> {
    m.validate()?;
    let denom = m.delta * m.beta1;
    Ok(DerivedParams {
        model: ModelKind::Supply,
        mu: m.mu,
        nu: m.nu,
        lam: (m.beta - m.beta1) / denom,
        xi: (m.alpha - m.alpha1) / denom,
        gamma: gamma_param(m.mu, m.nu)?,
        p_e: equilibrium(m.alpha, m.beta, m.alpha1, m.beta1),
        stable: m.beta1 / m.beta < 1.0,
    })
}

fn ml(mu: f64, gamma: f64, z: f64, cfg: &MLConfig) -> Result<f64> {
    ml_eval(&MLArgument::new(mu, gamma, z)?, cfg)
}

/// Shared body of the three closed forms: `C t^{g-1} E_{μ,g}(λt^μ) - ξ/λ + (ξ/λ) E_μ(λt^μ)`.
fn closed_form(d: &DerivedParams, g: f64, c: f64, t: f64, cfg: &MLConfig) -> Result<f64> {
    if d.lam == 0.0 {
        return Err(Error::DegenerateModel(
            "lambda = 0; closed form divides by lambda".into(),
        ));
    }
    if !t.is_finite() || t < 0.0 || (t == 0.0 && g < 1.0) {
        return Err(domain(format!(
            "time must be positive (got {t}) when gamma = {g} < 1"
        )));
    }
    let z = d.lam * t.powf(d.mu);
    let ratio = d.xi / d.lam;
    let e1 = ml(d.mu, 1.0, z, cfg)?;
    let eg = if g == 1.0 { e1 } else { ml(d.mu, g, z, cfg)? };
    let homogeneous = if c == 0.0 {
        0.0
    } else {
        c * t.powf(g - 1.0) * eg
    };
    Ok(homogeneous - ratio + ratio * e1)
}

/// Price at time `t` for the Hilfer model with initial constant `c`.
pub fn price_at(d: &DerivedParams, c: f64, t: f64) -> Result<f64> {
    price_at_with(d, c, t, &MLConfig::default())
}

pub fn price_at_with(d: &DerivedParams, c: f64, t: f64, cfg: &MLConfig) -> Result<f64> {
    closed_form(d, d.gamma, c, t, cfg)
}

/// Caputo solution `(C₀ + ξ/λ) E_μ(λt^μ) - ξ/λ`; `c0` is the initial price.
pub fn caputo_price(d: &DerivedParams, c0: f64, t: f64) -> Result<f64> {
    closed_form(d, 1.0, c0, t, &MLConfig::default())
}

/// Riemann-Liouville solution, `C₁ = (I^{1-μ} p)(0⁺)`.
pub fn rl_price(d: &DerivedParams, c1: f64, t: f64) -> Result<f64> {
    closed_form(d, d.mu, c1, t, &MLConfig::default())
}

/// Sampling times for a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TimeGrid {
    Explicit { times: Vec<f64> },
    Linear { start: f64, end: f64, points: usize },
    Log { start: f64, end: f64, points: usize },
}

impl TimeGrid {
    pub fn times(&self) -> Result<Vec<f64>> {
        let out = match *self {
            TimeGrid::Explicit { ref times } => times.clone(),
            TimeGrid::Linear { start, end, points } => {
                check_range(start, end, points)?;
                spaced(points, |f| start + f * (end - start), end)
            }
            TimeGrid::Log { start, end, points } => {
                check_range(start, end, points)?;
                let (ls, le) = (start.ln(), end.ln());
                spaced(points, |f| (ls + f * (le - ls)).exp(), end)
            }
        };
        if out.is_empty() {
            return Err(domain("time grid is empty"));
        }
        if out.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return Err(domain("time grid must contain finite positive times"));
        }
        if out.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("time grid must be strictly increasing"));
        }
        Ok(out)
    }
}

fn check_range(start: f64, end: f64, points: usize) -> Result<()> {
    if points == 0 {
        return Err(domain("time grid needs at least one point"));
    }
    if !(start > 0.0 && end >= start && end.is_finite()) {
        return Err(domain(format!("invalid time range [{start}, {end}]")));
    }
    if points > 1 && end == start {
        return Err(domain("repeated time in grid"));
    }
    Ok(())
}

fn spaced(points: usize, at: impl Fn(f64) -> f64, end: f64) -> Vec<f64> {
    if points == 1 {
        return vec![at(0.0)];
    }
    let n = (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i == points - 1 {
                end
            } else {
                at(i as f64 / n)
            }
        })
        .collect()
}

/// Sampled closed-form price path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub prices: Vec<f64>,
    pub model_tag: ModelKind,
    pub params: DerivedParams,
}

pub fn trajectory(d: &DerivedParams, c: f64, grid: &TimeGrid) -> Result<Trajectory> {
    let times = grid.times()?;
    let prices = times
        .par_iter()
        .map(|&t| price_at(d, c, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        times,
        prices,
        model_tag: d.model,
        params: *d,
    })
}

/// Long-run behaviour predicted by the stability condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub stable: bool,
    pub p_e: f64,
    /// `-ξ/λ` when stable.
    pub limit: Option<f64>,
    /// Whether `λ < 0`; convergence of the closed form needs it.
    pub lambda_negative: bool,
    pub warning: Option<String>,
}

pub fn classify(d: &DerivedParams) -> StabilityReport {
    let lambda_negative = d.lam < 0.0;
    let warning = if !d.stable {
        Some("beta1/beta >= 1: the price path is not expected to settle at p_e".to_string())
    } else if !lambda_negative {
        Some("beta1/beta < 1 but lambda >= 0: the closed form grows without bound".to_string())
    } else {
        None
    };
    StabilityReport {
        stable: d.stable,
        p_e: d.p_e,
        limit: d.stable.then(|| -d.xi / d.lam),
        lambda_negative,
        warning,
    }
}
