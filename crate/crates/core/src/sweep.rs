//! Parameter sweeps over `(μ, ν)` producing tables and trajectory families.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cobweb::{price_at, trajectory, DemandModel, Model, SupplyModel, TimeGrid, Trajectory};
use crate::error::{domain, Result};

/// `ν = 0, 0.2, …, 1`.
pub const DEFAULT_NUS: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];

/// Demand-side example: `D = 40 - 10p`, `S = 2 + 9p`, with initial constant `c`.
pub fn example_demand(c: f64) -> Model {
    Model::Demand(DemandModel {
        alpha: 40.0,
        beta: -10.0,
        alpha1: 2.0,
        beta1: 9.0,
        mu: 1.0,
        nu: 1.0,
        c,
    })
}

/// Supply-side example: `D = 80 - 4p`, `S = -10 + 2(p + 3 D^{μ,ν}p)`, with initial constant `c`.
pub fn example_supply(c: f64) -> Model {
    Model::Supply(SupplyModel {
        alpha: 80.0,
        beta: -4.0,
        alpha1: -10.0,
        beta1: 2.0,
        delta: 3.0,
        mu: 1.0,
        nu: 1.0,
        c,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub mu: f64,
    pub nu: f64,
    /// `p(t)` at each table time.
    pub cells: Vec<f64>,
    pub p_e: f64,
}

/// Prices for every `(μ, ν)` pair (μ outer, ν inner) at fixed times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub times: Vec<f64>,
    pub rows: Vec<TableRow>,
}

fn check_lists(mus: &[f64], nus: &[f64]) -> Result<()> {
    if mus.is_empty() || nus.is_empty() {
        return Err(domain("need at least one mu and one nu"));
    }
    Ok(())
}

fn pairs(mus: &[f64], nus: &[f64]) -> Vec<(f64, f64)> {
    mus.iter()
        .flat_map(|&mu| nus.iter().map(move |&nu| (mu, nu)))
        .collect()
}

/// Each cell is exactly `price_at(derive(model with μ, ν), c, t)`.
pub fn table(model: &Model, mus: &[f64], nus: &[f64], times: &[f64]) -> Result<Table> {
    check_lists(mus, nus)?;
    if times.is_empty() {
        return Err(domain("need at least one time"));
    }
    let c = model.c();
    let rows = pairs(mus, nus)
        .into_par_iter()
        .map(|(mu, nu)| {
            let d = model.with_orders(mu, nu).derive()?;
            let cells = times
                .iter()
                .map(|&t| price_at(&d, c, t))
                .collect::<Result<Vec<_>>>()?;
            Ok(TableRow {
                mu,
                nu,
                cells,
                p_e: d.p_e,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        times: times.to_vec(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub mu: f64,
    pub nu: f64,
    pub trajectory: Trajectory,
}

/// One trajectory per `(μ, ν)` pair, in the same order as [`table`] rows.
pub fn trajectory_family(
    model: &Model,
    mus: &[f64],
    nus: &[f64],
    grid: &TimeGrid,
) -> Result<Vec<Curve>> {
    check_lists(mus, nus)?;
    grid.times()?;
    let c = model.c();
    pairs(mus, nus)
        .into_iter()
        .map(|(mu, nu)| {
            let d = model.with_orders(mu, nu).derive()?;
            Ok(Curve {
                mu,
                nu,
                trajectory: trajectory(&d, c, grid)?,
            })
        })
        .collect()
}
