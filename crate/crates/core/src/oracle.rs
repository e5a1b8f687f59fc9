//! Numerical fractional operators used to check closed-form solutions.
//!
//! The Riemann-Liouville integral is discretised by product integration: the
//! kernel `(t - s)^{α-1}` is integrated exactly against the piecewise-linear
//! interpolant of the samples, which gives `O(h²)` for smooth integrands. The
//! Hilfer derivative is the composition `I^{ν(1-μ)} ∘ D ∘ I^{(1-ν)(1-μ)}` with
//! a five-point central difference for `D`.
//!
//! [`residual`] applies the composition to a closed-form price path. The path
//! is singular like `t^{γ-1}` at the origin, so the contribution of `[0, t₀]`
//! to each integral is taken from tanh-sinh quadrature of the exact solution
//! and only the remainder runs on the uniform grid.

use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cobweb::{price_at, DerivedParams};
use crate::error::{domain, Error, Result};
use crate::quad;
use crate::special::recip_gamma;

/// Below `m = SERIES_FROM` weights are formed directly; above, from a binomial series.
const SERIES_FROM: usize = 10;
const BINOMIAL_TERMS: usize = 24;
/// Tolerance of the history quadratures, relative to `∫|f|`.
const HISTORY_TOL: f64 = 1e-13;
const HISTORY_MAX_LEVEL: u32 = 10;
/// Minimum number of residual points.
pub const MIN_POINTS: usize = 16;

/// Samples `values[k] = f(t0 + k h)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub t0: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(t0: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        let g = Self { t0, h, values };
        g.validate()?;
        Ok(g)
    }

    /// Sample `f` at `n` points starting at `t0`.
    pub fn sample(t0: f64, h: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(t0, h, (0..n).map(|k| f(t0 + k as f64 * h)).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(domain("grid function has no samples"));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(domain(format!(
                "grid step must be positive, got {}",
                self.h
            )));
        }
        if !(self.t0 >= 0.0 && self.t0.is_finite()) {
            return Err(domain(format!(
                "grid start must be non-negative, got {}",
                self.t0
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.h
    }
}

/// `(m+1)^p - 2 m^p + (m-1)^p`, accurate for large `m`.
fn second_difference(m: usize, p: f64) -> f64 {
    let mf = m as f64;
    if m < SERIES_FROM {
        return (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
    }
    // m^p · 2 Σ_{k≥1} C(p, 2k) m^{-2k}
    let inv2 = 1.0 / (mf * mf);
    let mut binom = 1.0;
    let mut pow = 1.0;
    let mut acc = 0.0;
    for n in 1..=2 * BINOMIAL_TERMS {
        binom *= (p - (n - 1) as f64) / n as f64;
        if n % 2 == 0 {
            pow *= inv2;
            let term = binom * pow;
            acc += term;
            if term.abs() < 1e-18 * acc.abs() {
                break;
            }
        }
    }
    2.0 * mf.powf(p) * acc
}

/// `(k-1)^{α+1} - (k-1-α) k^α`, accurate for large `k`.
fn first_weight(k: usize, alpha: f64) -> f64 {
    let kf = k as f64;
    let p = alpha + 1.0;
    if k < SERIES_FROM {
        return (kf - 1.0).powf(p) - (kf - 1.0 - alpha) * kf.powf(alpha);
    }
    // k^α Σ_{j≥2} (-1)^j C(p, j) k^{1-j}
    let inv = 1.0 / kf;
    let mut binom = p;
    let mut pow = 1.0;
    let mut acc = 0.0;
    for j in 2..=2 * BINOMIAL_TERMS {
        binom *= (p - (j - 1) as f64) / j as f64;
        pow *= inv;
        let term = if j % 2 == 0 {
            binom * pow
        } else {
            -binom * pow
        };
        acc += term;
        if term.abs() < 1e-18 * acc.abs() {
            break;
        }
    }
    kf.powf(alpha) * acc
}

/// Product-trapezoid weights for `I^α` on a uniform grid with `n` points.
struct TrapezoidWeights {
    scale: f64,
    first: Vec<f64>,
    interior: Vec<f64>,
}

impl TrapezoidWeights {
    fn new(alpha: f64, h: f64, n: usize) -> Self {
        let p = alpha + 1.0;
        Self {
            scale: h.powf(alpha) * recip_gamma(alpha + 2.0),
            first: (0..n)
                .map(|k| if k == 0 { 0.0 } else { first_weight(k, alpha) })
                .collect(),
            interior: (0..n)
                .map(|m| if m == 0 { 0.0 } else { second_difference(m, p) })
                .collect(),
        }
    }

    fn apply(&self, v: &[f64], k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let interior: f64 = v[1..k]
            .iter()
            .zip(self.interior[1..k].iter().rev())
            .map(|(x, w)| x * w)
            .sum();
        self.scale * (self.first[k] * v[0] + interior + v[k])
    }
}

/// `I^α v` at every grid index, with the grid start as the lower terminal.
fn trapezoid_all(v: &[f64], alpha: f64, h: f64) -> Vec<f64> {
    if alpha == 0.0 {
        return v.to_vec();
    }
    let w = TrapezoidWeights::new(alpha, h, v.len());
    (0..v.len())
        .into_par_iter()
        .map(|k| w.apply(v, k))
        .collect()
}

fn check_order(order: f64) -> Result<()> {
    if order > 0.0 && order < 1.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "integral order must lie in (0, 1), got {order}"
        )))
    }
}

/// `(I^α f)(t_k) = 1/Γ(α) ∫_{t0}^{t_k} (t_k - s)^{α-1} f(s) ds` by product trapezoid.
///
/// The lower terminal is the first grid point; for integrals from the origin
/// sample with `t0 = 0`.
pub fn rl_integral(f: &GridFunction, order: f64, k: usize) -> Result<f64> {
    f.validate()?;
    check_order(order)?;
    if k >= f.len() {
        return Err(domain(format!(
            "index {k} outside grid of {} points",
            f.len()
        )));
    }
    Ok(TrapezoidWeights::new(order, f.h, k + 1).apply(&f.values, k))
}

/// [`rl_integral`] at every grid index.
pub fn rl_integral_all(f: &GridFunction, order: f64) -> Result<GridFunction> {
    f.validate()?;
    check_order(order)?;
    Ok(GridFunction {
        t0: f.t0,
        h: f.h,
        values: trapezoid_all(&f.values, order, f.h),
    })
}

#[inline]
fn five_point(v: &[f64], k: usize, h: f64) -> f64 {
    (v[k - 2] - 8.0 * v[k - 1] + 8.0 * v[k + 1] - v[k + 2]) / (12.0 * h)
}

/// First derivative: five-point central stencil, three-point near the ends.
fn central_difference(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    let mut d = vec![0.0; n];
    if n < 3 {
        return d;
    }
    for (k, dk) in d.iter_mut().enumerate().take(n.saturating_sub(2)).skip(2) {
        *dk = five_point(v, k, h);
    }
    for k in [1, n - 2] {
        d[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    d
}

/// Orders `(a, b)` of the inner and outer integrals of `D^{μ,ν}`.
pub fn hilfer_orders(mu: f64, nu: f64) -> (f64, f64) {
    ((1.0 - nu) * (1.0 - mu), nu * (1.0 - mu))
}

fn check_hilfer(mu: f64, nu: f64) -> Result<()> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(domain(format!("mu must lie in (0, 1], got {mu}")));
    }
    if !(0.0..=1.0).contains(&nu) {
        return Err(domain(format!("nu must lie in [0, 1], got {nu}")));
    }
    Ok(())
}

/// `(D^{μ,ν} f)(t_k)` with the grid start as the lower terminal.
///
/// Needs two grid points on either side of `k`.
pub fn hilfer_derivative(f: &GridFunction, mu: f64, nu: f64, k: usize) -> Result<f64> {
    f.validate()?;
    check_hilfer(mu, nu)?;
    if k < 2 || k + 3 > f.len() {
        return Err(domain(format!(
            "index {k} too close to the edge of a {}-point grid",
            f.len()
        )));
    }
    let (a, b) = hilfer_orders(mu, nu);
    let q = trapezoid_all(&f.values[..=k + 2], a, f.h);
    let dq = central_difference(&q, f.h);
    if b == 0.0 {
        return Ok(dq[k]);
    }
    Ok(TrapezoidWeights::new(b, f.h, k + 1).apply(&dq, k))
}

/// Pointwise `|D^{μ,ν}p - (λp + ξ)|` on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub times: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub grid_h: f64,
}

/// Two residual runs at `h` and `h/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub coarse: ResidualReport,
    pub fine: ResidualReport,
    /// `coarse.max_residual / fine.max_residual`; `None` when the fine residual vanishes.
    pub ratio: Option<f64>,
}

/// Residual of the closed-form path `p = price_at(d, c, ·)` in `D^{μ,ν}p = λp + ξ`
/// at the grid points of `[t_range.0, t_range.1]`.
pub fn residual(d: &DerivedParams, c: f64, t_range: (f64, f64), h: f64) -> Result<ResidualReport> {
    check_hilfer(d.mu, d.nu)?;
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let p = |t: f64| match price_at(d, c, t) {
        Ok(v) => v,
        Err(e) => {
            failure.lock().unwrap().get_or_insert(e);
            f64::NAN
        }
    };
    let report = residual_of(&p, d.mu, d.nu, d.lam, d.xi, c, t_range, h)?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(report)
}

/// Residual runs at `h` and `h/2`.
pub fn refinement(d: &DerivedParams, c: f64, t_range: (f64, f64), h: f64) -> Result<Refinement> {
    let coarse = residual(d, c, t_range, h)?;
    let fine = residual(d, c, t_range, 0.5 * h)?;
    let ratio = (fine.max_residual > 0.0).then(|| coarse.max_residual / fine.max_residual);
    Ok(Refinement {
        coarse,
        fine,
        ratio,
    })
}

/// `1/Γ(α) ∫_0^x (x - r)^{α-1} p(r) dr` by adaptive tanh-sinh quadrature.
fn exact_integral(p: &(dyn Fn(f64) -> f64 + Sync), alpha: f64, x: f64) -> f64 {
    if alpha == 0.0 {
        return p(x);
    }
    let r = quad::integrate(
        |_, from0, fromx| fromx.powf(alpha - 1.0) * p(from0),
        0.0,
        x,
        HISTORY_TOL,
        HISTORY_MAX_LEVEL,
    );
    r.value * recip_gamma(alpha)
}

/// Residual of an arbitrary path `p` solving `D^{μ,ν}p = λp + ξ` with `(I^{1-γ}p)(0⁺) = c`.
///
/// The uniform lattice `x_j = s_a + j h` starts at `s_a ≈ t₀/4`; the inner
/// integral `q = I^a p` takes `[0, s_a]` from quadrature, the outer one takes
/// `[0, s_b]` (`s_b ≈ t₀/2`) from quadrature after an integration by parts
/// that moves the derivative off `q`.
#[allow(clippy::too_many_arguments)]
pub fn residual_of(
    p: &(dyn Fn(f64) -> f64 + Sync),
    mu: f64,
    nu: f64,
    lam: f64,
    xi: f64,
    c: f64,
    t_range: (f64, f64),
    h: f64,
) -> Result<ResidualReport> {
    check_hilfer(mu, nu)?;
    let (t_start, t_end) = t_range;
    if !(t_start > 0.0 && t_end > t_start && t_end.is_finite()) {
        return Err(domain(format!(
            "invalid residual range [{t_start}, {t_end}]"
        )));
    }
    if !(h > 0.0 && h <= t_start / 8.0) {
        return Err(domain(format!(
            "step {h} must be positive and at most t_start/8"
        )));
    }
    let n_points = ((t_end - t_start) / h + 1e-9).floor() as usize + 1;
    if n_points < MIN_POINTS {
        return Err(domain(format!(
            "{n_points} residual points; need at least {MIN_POINTS}"
        )));
    }
    let (a, b) = hilfer_orders(mu, nu);

    let n_b = (t_start / (2.0 * h)).round() as usize;
    let n_a = (t_start / (4.0 * h)).round() as usize;
    let s_b = t_start - n_b as f64 * h;
    let s_a = s_b - n_a as f64 * h;
    let j_first = n_a + n_b;
    let j_last = j_first + n_points - 1;
    let x = |j: usize| s_a + j as f64 * h;

    // p on the lattice, two points past the last target for the difference stencil.
    let p_grid: Vec<f64> = (0..=j_last + 2).into_par_iter().map(|j| p(x(j))).collect();

    // q = I^a p on the lattice
    let q_grid: Vec<f64> = if a == 0.0 {
        p_grid.clone()
    } else {
        let bulk = trapezoid_all(&p_grid, a, h);
        let worst = x(n_a - 2) - s_a;
        let (samples, _) = quad::sample_adaptive(
            0.0,
            s_a,
            HISTORY_TOL,
            HISTORY_MAX_LEVEL,
            |n| p(n.from_a),
            |n| (worst + n.from_b).powf(a - 1.0),
        );
        let ga = recip_gamma(a);
        bulk.par_iter()
            .enumerate()
            .map(|(j, &bulk_j)| {
                if j + 2 < n_a {
                    return f64::NAN;
                }
                let dx = x(j) - s_a;
                let hist: f64 = samples
                    .iter()
                    .map(|(n, g)| n.weight * (dx + n.from_b).powf(a - 1.0) * g)
                    .sum();
                ga * hist + bulk_j
            })
            .collect()
    };

    let dq: Vec<f64> = (n_a..=j_last).map(|j| five_point(&q_grid, j, h)).collect();

    let lhs: Vec<f64> = if b == 0.0 {
        dq[n_b..].to_vec()
    } else {
        // ∫_0^{s_b} (t-s)^{b-1} q'(s) ds
        //   = (t-s_b)^{b-1} q(s_b) - t^{b-1} q(0⁺) - (1-b) ∫_0^{s_b} (t-s)^{b-2} q(s) ds
        let q_sb = exact_integral(p, a, s_b);
        let t_near = x(j_first);
        let (samples, _) = quad::sample_adaptive(
            0.0,
            s_b,
            HISTORY_TOL,
            HISTORY_MAX_LEVEL,
            |n| exact_integral(p, a, n.from_a),
            |n| (t_near - s_b + n.from_b).powf(b - 2.0),
        );
        let w = TrapezoidWeights::new(b, h, dq.len());
        let gb = recip_gamma(b);
        (j_first..=j_last)
            .into_par_iter()
            .map(|j| {
                let t = x(j);
                let dt = t - s_b;
                let tail: f64 = samples
                    .iter()
                    .map(|(n, g)| n.weight * (dt + n.from_b).powf(b - 2.0) * g)
                    .sum();
                let hist = dt.powf(b - 1.0) * q_sb - t.powf(b - 1.0) * c - (1.0 - b) * tail;
                gb * hist + w.apply(&dq, j - n_a)
            })
            .collect()
    };

    let times: Vec<f64> = (j_first..=j_last).map(x).collect();
    let residuals: Vec<f64> = lhs
        .iter()
        .zip(j_first..=j_last)
        .map(|(l, j)| (l - (lam * p_grid[j] + xi)).abs())
        .collect();
    if residuals.iter().any(|r| r.is_nan()) {
        return Err(domain("residual evaluation produced NaN"));
    }
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(ResidualReport {
        times,
        residuals,
        max_residual,
        grid_h: h,
    })
}
