//! Merging of flags, the optional JSON config file and defaults.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fraccob_core::cobweb::ModelKind;
use fraccob_core::sweep::{example_demand, example_supply, DEFAULT_NUS};
use fraccob_core::{DemandModel, MLConfig, Model, SupplyModel, TimeGrid};
use serde::Deserialize;

use crate::args::{Format, MlArgs, MlfArgs, RunArgs, VerifyArgs};

pub const DEFAULT_PRECISION: usize = 6;
pub const DEFAULT_C: f64 = 20.0;
pub const DEFAULT_MU: f64 = 0.5;
pub const TABLE_TIMES: [f64; 3] = [100.0, 1000.0, 10000.0];
pub const TRAJ_POINTS: usize = 400;
pub const TRAJ_RANGE: (f64, f64) = (0.01, 1e4);
pub const VERIFY_RANGE: (f64, f64) = (0.5, 20.0);
pub const VERIFY_H: f64 = 0.01;

/// Contents of `--config`; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<ModelKind>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub alpha1: Option<f64>,
    pub beta1: Option<f64>,
    pub delta: Option<f64>,
    pub mu: Option<Vec<f64>>,
    pub nu: Option<Vec<f64>>,
    pub c: Option<f64>,
    pub times: Option<Vec<f64>>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub points: Option<usize>,
    pub log: Option<bool>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub precision: Option<usize>,
    pub h: Option<f64>,
    pub ml: Option<MLConfig>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    fn load_opt(path: Option<&PathBuf>) -> Result<Self> {
        path.map_or_else(|| Ok(Self::default()), |p| Self::load(p))
    }
}

/// Which subcommand the defaults are for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Table,
    Traj,
    Verify,
}

/// Fully resolved settings for `table`, `traj` and `verify`.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Coefficients; the orders inside are placeholders, see `mus` and `nus`.
    pub model: Model,
    pub mus: Vec<f64>,
    pub nus: Vec<f64>,
    pub c: f64,
    /// Sampling times (`table`, `traj`).
    pub grid: TimeGrid,
    /// Residual window (`verify`).
    pub range: (f64, f64),
    pub h: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub precision: usize,
}

fn build_model(kind: ModelKind, a: &RunArgs, f: &FileConfig, c: f64) -> Result<Model> {
    let base = match kind {
        ModelKind::Demand => example_demand(c),
        ModelKind::Supply => example_supply(c),
    };
    let pick =
        |flag: Option<f64>, file: Option<f64>, default: f64| flag.or(file).unwrap_or(default);
    Ok(match base {
        Model::Demand(m) => {
            if a.delta.or(f.delta).is_some() {
                bail!("--delta applies to the supply model only");
            }
            Model::Demand(DemandModel {
                alpha: pick(a.alpha, f.alpha, m.alpha),
                beta: pick(a.beta, f.beta, m.beta),
                alpha1: pick(a.alpha1, f.alpha1, m.alpha1),
                beta1: pick(a.beta1, f.beta1, m.beta1),
                ..m
            })
        }
        Model::Supply(m) => Model::Supply(SupplyModel {
            alpha: pick(a.alpha, f.alpha, m.alpha),
            beta: pick(a.beta, f.beta, m.beta),
            alpha1: pick(a.alpha1, f.alpha1, m.alpha1),
            beta1: pick(a.beta1, f.beta1, m.beta1),
            delta: pick(a.delta, f.delta, m.delta),
            ..m
        }),
    })
}

fn build_grid(a: &RunArgs, f: &FileConfig, purpose: Purpose) -> Result<TimeGrid> {
    if let Some(times) = a.times.clone() {
        return Ok(TimeGrid::Explicit { times });
    }
    let flag_range = a.t_start.is_some() || a.t_end.is_some() || a.points.is_some() || a.log;
    if !flag_range {
        if let Some(times) = f.times.clone() {
            return Ok(TimeGrid::Explicit { times });
        }
    }
    let start = a.t_start.or(f.t_start);
    let end = a.t_end.or(f.t_end);
    let points = a.points.or(f.points);
    let log = a.log || f.log.unwrap_or(false);
    if start.is_none() && end.is_none() && points.is_none() {
        return Ok(match purpose {
            Purpose::Table => TimeGrid::Explicit {
                times: TABLE_TIMES.to_vec(),
            },
            _ => TimeGrid::Log {
                start: TRAJ_RANGE.0,
                end: TRAJ_RANGE.1,
                points: TRAJ_POINTS,
            },
        });
    }
    let (start, end) = (start.unwrap_or(TRAJ_RANGE.0), end.unwrap_or(TRAJ_RANGE.1));
    let points = points.unwrap_or(TRAJ_POINTS);
    Ok(if log {
        TimeGrid::Log { start, end, points }
    } else {
        TimeGrid::Linear { start, end, points }
    })
}

fn non_empty(name: &str, v: Vec<f64>) -> Result<Vec<f64>> {
    if v.is_empty() {
        bail!("--{name} needs at least one value");
    }
    Ok(v)
}

pub fn resolve(a: &RunArgs, h: Option<f64>, purpose: Purpose) -> Result<RunConfig> {
    let f = FileConfig::load_opt(a.config.as_ref())?;
    let kind = a
        .model
        .map(ModelKind::from)
        .or(f.model)
        .unwrap_or(ModelKind::Demand);
    let c = a.c.or(f.c).unwrap_or(DEFAULT_C);
    let model = build_model(kind, a, &f, c)?;
    let mus = non_empty(
        "mu",
        a.mu.clone()
            .or(f.mu.clone())
            .unwrap_or_else(|| vec![DEFAULT_MU]),
    )?;
    let nus = non_empty(
        "nu",
        a.nu.clone()
            .or(f.nu.clone())
            .unwrap_or_else(|| DEFAULT_NUS.to_vec()),
    )?;
    let grid = build_grid(a, &f, purpose)?;
    let range = (
        a.t_start.or(f.t_start).unwrap_or(VERIFY_RANGE.0),
        a.t_end.or(f.t_end).unwrap_or(VERIFY_RANGE.1),
    );
    let default_format = if purpose == Purpose::Verify {
        Format::Json
    } else {
        Format::Csv
    };
    let precision = a.precision.or(f.precision).unwrap_or(DEFAULT_PRECISION);
    if !(1..=17).contains(&precision) {
        bail!("--precision must be between 1 and 17, got {precision}");
    }
    Ok(RunConfig {
        model,
        mus,
        nus,
        c,
        grid,
        range,
        h: h.or(f.h).unwrap_or(VERIFY_H),
        format: a.format.or(f.format).unwrap_or(default_format),
        out: a.out.clone().or(f.out),
        precision,
    })
}

pub fn resolve_verify(v: &VerifyArgs) -> Result<RunConfig> {
    resolve(&v.run, v.h, Purpose::Verify)
}

fn apply_ml(base: MLConfig, m: &MlArgs) -> MLConfig {
    MLConfig {
        series_tol: m.series_tol.unwrap_or(base.series_tol),
        max_terms: m.max_terms.unwrap_or(base.max_terms),
        asym_switch: m.asym_switch.unwrap_or(base.asym_switch),
        asym_terms: m.asym_terms.unwrap_or(base.asym_terms),
    }
}

/// Evaluation policy and output precision for `mlf`.
pub fn resolve_mlf(a: &MlfArgs) -> Result<(MLConfig, usize)> {
    let f = FileConfig::load_opt(a.config.as_ref())?;
    let cfg = apply_ml(f.ml.unwrap_or_default(), &a.ml);
    cfg.validate()?;
    let precision = a.precision.or(f.precision).unwrap_or(DEFAULT_PRECISION);
    if !(1..=17).contains(&precision) {
        bail!("--precision must be between 1 and 17, got {precision}");
    }
    Ok((cfg, precision))
}
