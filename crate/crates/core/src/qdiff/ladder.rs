//! Geometric circle ladders `|p|^k t`, `p = 1/q`, and the growth check for `M_k = M(|p|^k t, f) + 1`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::least_squares;
use crate::logspace::log_add_exp;
use crate::models::{FunctionModel, PointKind};
use crate::nevanlinna::max_modulus_at;
use crate::scales::PhiScale;

use super::equation::QDifferenceEquation;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderOptions {
    pub rungs: usize,
    /// Half-width, in `log r`, of the band kept clear around each pole or zero modulus.
    pub clearance: f64,
    pub max_attempts: usize,
}

impl Default for LadderOptions {
    fn default() -> Self {
        Self { rungs: 40, clearance: 1e-3, max_attempts: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    /// The `q` of the equation the ladder belongs to, with `|q| < 1`.
    pub q: Complex64,
    pub t: f64,
    pub log_radii: Vec<f64>,
    /// Starting values tried before `t` was accepted.
    pub attempts: usize,
    /// The equation was rewritten with `1/q` first.
    pub transformed: bool,
}

/// `t0` first, then midpoints of successive dyadic subdivisions of `[1, |p|)`.
fn candidates(t0: f64, p: f64) -> impl Iterator<Item = f64> {
    std::iter::once(t0).chain((1u32..).flat_map(move |m| {
        let cells = 1u64 << m;
        (0..cells / 2).map(move |j| 1.0 + (p - 1.0) * (2 * j + 1) as f64 / cells as f64)
    }))
}

/// Radii `|p|^k t`, `k = 0..rungs`, kept off the circles `log r ∈ avoid`.
pub fn mk_circle_ladder(q: Complex64, t0: f64, avoid: &[f64], opts: &LadderOptions) -> Result<Ladder> {
    if !(q.norm() < 1.0) || q.norm() == 0.0 {
        return Err(Error::InvalidParameter(format!("ladder needs 0 < |q| < 1, got |q| = {}; invert the equation first", q.norm())));
    }
    let lp = -q.norm().ln();
    let p = lp.exp();
    if !(t0 >= 1.0 && t0 < p) {
        return Err(Error::InvalidParameter(format!("t = {t0} outside [1, {p})")));
    }
    for (attempt, t) in candidates(t0, p).take(opts.max_attempts).enumerate() {
        let radii: Vec<f64> = (0..opts.rungs).map(|k| t.ln() + k as f64 * lp).collect();
        let clear = radii.iter().all(|&x| avoid.iter().all(|&a| (x - a).abs() > opts.clearance));
        if clear {
            return Ok(Ladder { q, t, log_radii: radii, attempts: attempt + 1, transformed: false });
        }
    }
    Err(Error::ConstructionInapplicable(format!("no admissible t in {} attempts", opts.max_attempts)))
}

/// Moduli to avoid: poles of the coefficients and of `f`, and zeros of `a_0`.
fn avoid_list(eq: &QDifferenceEquation, f: Option<&FunctionModel>, log_r_max: f64) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut push = |m: &FunctionModel, kind: PointKind| -> Result<()> {
        if let FunctionModel::PowerSeries(_) = m {
            if kind == PointKind::Poles {
                return Ok(());
            }
        }
        let list = m.points_upto(kind, log_r_max)?;
        out.extend(list.points.iter().map(|z| z.log_modulus).filter(|v| v.is_finite()));
        Ok(())
    };
    for m in eq.all_models() {
        push(m, PointKind::Poles)?;
    }
    push(&eq.coeffs()[0], PointKind::Zeros)?;
    if let Some(f) = f {
        push(f, PointKind::Poles)?;
    }
    Ok(out)
}

/// Builds the ladder for `eq`, inverting it first when `|q| > 1`.
pub fn ladder_for_equation(eq: &QDifferenceEquation, f: Option<&FunctionModel>, t0: f64, opts: &LadderOptions) -> Result<Ladder> {
    if eq.is_unimodular() {
        return Err(Error::InvalidParameter("the ladder needs |q| ≠ 1".into()));
    }
    let small = eq.with_small_q()?;
    let transformed = small.q() != eq.q();
    let lp = -small.q().norm().ln();
    let top = t0.ln().max(0.0) + lp * (opts.rungs as f64 + 1.0);
    let avoid = avoid_list(&small, f, top)?;
    let mut l = mk_circle_ladder(small.q(), t0, &avoid, opts)?;
    l.transformed = transformed;
    Ok(l)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderRow {
    pub k: usize,
    pub log_r: f64,
    /// `log M_k = log(M(r_k, f) + 1)`.
    pub log_mk: f64,
    /// `log M_k / (k φ(r_k)^{J0+ε} log r_k)`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub j0: f64,
    pub epsilon: f64,
    pub rows: Vec<LadderRow>,
    pub constant: f64,
    /// Slope of `log ratio` against `log k` on the upper half of the rungs.
    pub tail_slope: f64,
    pub bounded: bool,
}

fn log_max_modulus(f: &FunctionModel, x: f64) -> Result<f64> {
    if f.is_entire() {
        return Ok(max_modulus_at(f, x)?.0);
    }
    let c = f.circle(x)?;
    Ok((0..1024).map(|j| c.eval(TAU * j as f64 / 1024.0).log_abs).fold(f64::NEG_INFINITY, f64::max))
}

/// Compares `log M_k` with `k φ(r_k)^{J0+ε} log r_k` along the ladder. Rungs beyond the
/// certified range of `f` are dropped.
pub fn ladder_check(f: &FunctionModel, phi: &PhiScale, ladder: &Ladder, j0: f64, epsilon: f64, slope_limit: f64) -> Result<LadderReport> {
    let max = f.max_log_r();
    let mut rows = Vec::new();
    for (k, &x) in ladder.log_radii.iter().enumerate() {
        if k == 0 || x <= 0.0 || x > max {
            continue;
        }
        let log_mk = log_add_exp(0.0, log_max_modulus(f, x)?);
        let denom = (k as f64).ln() + (j0 + epsilon) * phi.log_phi(x) + x.ln();
        rows.push(LadderRow { k, log_r: x, log_mk, ratio: (log_mk.ln() - denom).exp() });
    }
    if rows.len() < 4 {
        return Err(Error::InsufficientGrid(format!("{} usable rungs, need at least 4", rows.len())));
    }
    let constant = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let half = &rows[rows.len() / 2..];
    let tail_slope = least_squares(half.iter().map(|r| ((r.k as f64).ln(), r.ratio.ln()))).map_or(f64::NAN, |f| f.slope);
    let bounded = constant.is_finite() && tail_slope < slope_limit;
    Ok(LadderReport { j0, epsilon, rows, constant, tail_slope, bounded })
}
