//! Counting functions, the characteristic `T = m + N` and the maximum modulus.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RadiusGrid;
use crate::models::{FunctionModel, PointKind};

use super::order::Quantity;
use super::quadrature::{proximity_shifted, QuadOptions};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counting {
    /// `n(r)` with multiplicity.
    pub n: u64,
    /// `N(r) = Σ log(r/|z_k|) + n(0)·log r`.
    pub big_n: f64,
}

pub fn counting(model: &FunctionModel, log_r: f64, kind: PointKind) -> Result<Counting> {
    let list = model.points_upto(kind, log_r)?;
    if !list.complete {
        return Err(Error::UncertifiedRoots(format!("{kind:?} of the model are not all certified up to log r = {log_r}")));
    }
    let mut n = 0u64;
    let mut big_n = 0.0;
    for z in &list.points {
        let m = z.multiplicity as u64;
        n += m;
        let d = if z.log_modulus == f64::NEG_INFINITY { log_r } else { log_r - z.log_modulus };
        big_n += m as f64 * d.max(0.0);
    }
    Ok(Counting { n, big_n })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicSample {
    pub log_r: f64,
    pub m: f64,
    pub n_poles: u64,
    pub big_n_poles: f64,
    pub t: f64,
    pub log_m: Option<f64>,
    pub quadrature_error: f64,
}

fn check_range(model: &FunctionModel, log_r: f64) -> Result<()> {
    let max = model.max_log_r();
    if log_r > max {
        return Err(Error::RadiusOutOfRange { log_r, max_log_r: max });
    }
    Ok(())
}

/// One sample per grid radius. Circles too close to a pole are nudged outward and the
/// radius actually used is recorded.
pub fn characteristic(model: &FunctionModel, grid: &RadiusGrid, opts: &QuadOptions) -> Result<Vec<CharacteristicSample>> {
    for &x in grid.log_r() {
        check_range(model, x)?;
    }
    grid.log_r().par_iter().map(|&x| characteristic_at(model, x, opts)).collect()
}

pub fn characteristic_at(model: &FunctionModel, log_r: f64, opts: &QuadOptions) -> Result<CharacteristicSample> {
    check_range(model, log_r)?;
    let (x, q) = proximity_shifted(model, log_r, opts)?;
    let c = counting(model, x, PointKind::Poles)?;
    let log_m = if model.is_entire() { Some(max_modulus_at(model, x)?.0) } else { None };
    Ok(CharacteristicSample {
        log_r: x,
        m: q.value,
        n_poles: c.n,
        big_n_poles: c.big_n,
        t: q.value + c.big_n,
        log_m,
        quadrature_error: q.error,
    })
}

/// `log M(r, f)` with an error bound. Series use the coefficient envelope
/// (`max_k log|c_k| r^k ≤ log M ≤ log Σ|c_k| r^k`); other entire models are maximized
/// over `θ` with a golden-section polish.
pub fn max_modulus_at(model: &FunctionModel, log_r: f64) -> Result<(f64, f64)> {
    if !model.is_entire() {
        return Err(Error::UnsupportedVariant("maximum modulus of a function with poles".into()));
    }
    check_range(model, log_r)?;
    if let FunctionModel::PowerSeries(s) = model {
        let (env, _) = s.envelope(log_r);
        return Ok((env, s.log_abs_sum(log_r) - env));
    }
    let c = model.circle(log_r)?;
    let n = 512;
    let (mut best_t, mut best) = (0.0, f64::NEG_INFINITY);
    let mut err = 0.0f64;
    for j in 0..n {
        let t = TAU * j as f64 / n as f64;
        let v = c.eval(t);
        err = err.max(v.error_bound);
        if v.log_abs > best {
            best = v.log_abs;
            best_t = t;
        }
    }
    // golden-section on the bracketing cell
    let h = TAU / n as f64;
    let (mut a, mut b) = (best_t - h, best_t + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let f = |t: f64| c.eval(t).log_abs;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    Ok((best.max(f1).max(f2), err))
}

pub fn max_modulus(model: &FunctionModel, grid: &RadiusGrid) -> Result<Vec<(f64, f64)>> {
    grid.log_r().par_iter().map(|&x| max_modulus_at(model, x).map(|(v, _)| (x, v))).collect()
}

/// `(log r, X(r))` on the grid for the growth quantity `X`; `log M` is clamped to `log⁺ M`.
pub fn quantity_samples(model: &FunctionModel, grid: &RadiusGrid, quantity: Quantity, opts: &QuadOptions) -> Result<Vec<(f64, f64)>> {
    match quantity {
        Quantity::T => Ok(characteristic(model, grid, opts)?.iter().map(|s| (s.log_r, s.t)).collect()),
        Quantity::LogM => Ok(max_modulus(model, grid)?.into_iter().map(|(x, v)| (x, v.max(0.0))).collect()),
        Quantity::SmallN | Quantity::BigN => grid
            .log_r()
            .iter()
            .map(|&x| {
                let c = counting(model, x, PointKind::Zeros)?;
                Ok((x, if quantity == Quantity::SmallN { c.n as f64 } else { c.big_n }))
            })
            .collect(),
    }
}
