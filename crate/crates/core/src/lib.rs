//! Hilfer-fractional cobweb price dynamics.
//!
//! * [`mlf`] evaluates Mittag-Leffler functions `E_{μ,γ}` on the real line.
//! * [`cobweb`] holds the demand- and supply-side models, their closed-form
//!   price paths and the stability classification.
//! * [`oracle`] provides product-integration fractional operators and a
//!   residual check of the closed forms against the governing equation.
//! * [`sweep`] builds `(μ, ν)` tables and trajectory families.

pub mod cobweb;
pub mod error;
pub mod mlf;
pub mod oracle;
pub mod quad;
pub mod special;
pub mod sweep;

pub use cobweb::{
    caputo_price, classify, derive_demand, derive_supply, gamma_param, price_at, rl_price,
    trajectory, DemandModel, DerivedParams, Model, ModelKind, StabilityReport, SupplyModel,
    TimeGrid, Trajectory,
};
pub use error::{Error, Result};
pub use mlf::{
    mittag_leffler, ml_asymptotic, ml_eval, ml_series, recip_gamma, MLArgument, MLConfig, Regime,
};
pub use oracle::{
    hilfer_derivative, refinement, residual, rl_integral, GridFunction, Refinement, ResidualReport,
};
