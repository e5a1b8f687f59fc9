//! Subcommand implementations.

use std::io::Write;

use anyhow::{bail, Result};
use fraccob_core::sweep::{table, trajectory_family, Curve, Table};
use fraccob_core::{classify, ml_eval, refinement, MLArgument, Model};
use serde::Serialize;

use crate::args::{Format, MlfArgs, RunArgs, VerifyArgs};
use crate::config::{resolve, resolve_mlf, resolve_verify, Purpose, RunConfig};
use crate::format::{sig, sink};

fn warn_unstable(cfg: &RunConfig) -> Result<()> {
    for &mu in &cfg.mus {
        for &nu in &cfg.nus {
            let d = cfg.model.with_orders(mu, nu).derive()?;
            if let Some(w) = classify(&d).warning {
                eprintln!("warning: {w}");
                return Ok(());
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct TableDoc<'a> {
    model: &'a Model,
    c: f64,
    #[serde(flatten)]
    table: &'a Table,
}

pub fn write_table(cfg: &RunConfig, t: &Table, out: &mut dyn Write) -> Result<()> {
    match cfg.format {
        Format::Json => {
            let doc = TableDoc {
                model: &cfg.model,
                c: cfg.c,
                table: t,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let with_mu = cfg.mus.len() > 1;
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            let mut header: Vec<String> = Vec::new();
            if with_mu {
                header.push("mu".into());
            }
            header.push("nu".into());
            header.extend(t.times.iter().map(|x| x.to_string()));
            header.push("p_e".into());
            w.write_record(&header)?;
            for row in &t.rows {
                let mut rec: Vec<String> = Vec::new();
                if with_mu {
                    rec.push(row.mu.to_string());
                }
                rec.push(row.nu.to_string());
                rec.extend(row.cells.iter().map(|&v| sig(v, cfg.precision)));
                rec.push(sig(row.p_e, cfg.precision));
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn write_curves(cfg: &RunConfig, curves: &[Curve], out: &mut dyn Write) -> Result<()> {
    match cfg.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, curves)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let with_mu = cfg.mus.len() > 1;
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            if with_mu {
                w.write_record(["mu", "nu", "t", "p"])?;
            } else {
                w.write_record(["nu", "t", "p"])?;
            }
            for curve in curves {
                let tr = &curve.trajectory;
                for (&t, &p) in tr.times.iter().zip(&tr.prices) {
                    let mut rec: Vec<String> = Vec::new();
                    if with_mu {
                        rec.push(curve.mu.to_string());
                    }
                    rec.push(curve.nu.to_string());
                    rec.push(sig(t, cfg.precision));
                    rec.push(sig(p, cfg.precision));
                    w.write_record(&rec)?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn cmd_table(a: &RunArgs) -> Result<()> {
    let cfg = resolve(a, None, Purpose::Table)?;
    warn_unstable(&cfg)?;
    let t = table(&cfg.model, &cfg.mus, &cfg.nus, &cfg.grid.times()?)?;
    let mut out = sink(cfg.out.as_deref())?;
    write_table(&cfg, &t, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn cmd_traj(a: &RunArgs) -> Result<()> {
    let cfg = resolve(a, None, Purpose::Traj)?;
    warn_unstable(&cfg)?;
    let curves = trajectory_family(&cfg.model, &cfg.mus, &cfg.nus, &cfg.grid)?;
    let mut out = sink(cfg.out.as_deref())?;
    write_curves(&cfg, &curves, &mut out)?;
    out.flush()?;
    Ok(())
}

/// JSON verify report.
#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub model: String,
    pub mu: f64,
    pub nu: f64,
    pub h: f64,
    pub max_residual: f64,
    /// Max residual at `h` over max residual at `h/2`.
    pub refinement_ratio: Option<f64>,
    pub grid: Vec<f64>,
    pub residuals: Vec<f64>,
}

pub fn verify_reports(cfg: &RunConfig) -> Result<Vec<VerifyReport>> {
    let mut reports = Vec::new();
    for &mu in &cfg.mus {
        for &nu in &cfg.nus {
            let d = cfg.model.with_orders(mu, nu).derive()?;
            let r = refinement(&d, cfg.c, cfg.range, cfg.h)?;
            reports.push(VerifyReport {
                model: cfg.model.kind().to_string(),
                mu,
                nu,
                h: cfg.h,
                max_residual: r.coarse.max_residual,
                refinement_ratio: r.ratio,
                grid: r.coarse.times,
                residuals: r.coarse.residuals,
            });
        }
    }
    Ok(reports)
}

pub fn cmd_verify(v: &VerifyArgs) -> Result<()> {
    let cfg = resolve_verify(v)?;
    if cfg.format == Format::Csv {
        bail!("verify writes JSON only");
    }
    let reports = verify_reports(&cfg)?;
    let mut out = sink(cfg.out.as_deref())?;
    if let [single] = reports.as_slice() {
        serde_json::to_writer_pretty(&mut out, single)?;
    } else {
        serde_json::to_writer_pretty(&mut out, &reports)?;
    }
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn cmd_mlf(a: &MlfArgs) -> Result<()> {
    let (cfg, precision) = resolve_mlf(a)?;
    let v = ml_eval(&MLArgument::new(a.mu, a.gamma, a.z)?, &cfg)?;
    println!("{}", sig(v, precision));
    Ok(())
}
