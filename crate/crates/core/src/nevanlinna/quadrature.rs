//! Circle averages of `log⁺|f|` by the composite trapezoid rule with dyadic refinement.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{CircleEvaluator, FunctionModel, LogValue};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadOptions {
    pub min_points: usize,
    pub max_points: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { min_points: 1 << 10, max_points: 1 << 16, abs_tol: 1e-10, rel_tol: 1e-10 }
    }
}

impl QuadOptions {
    /// Poles closer than this (in `log r`) to the circle are rejected.
    pub fn clearance(&self) -> f64 {
        10.0 * TAU / self.max_points as f64
    }

    pub fn doubled(&self) -> Self {
        Self { min_points: self.min_points * 2, max_points: self.max_points * 2, ..*self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub value: f64,
    /// Refinement difference plus the largest pointwise evaluation bound.
    pub error: f64,
    pub points: usize,
    pub converged: bool,
}

/// Neumaier-compensated running sum together with `Σ|v|` for its rounding bound.
#[derive(Clone, Copy, Default)]
struct Accumulator {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl Accumulator {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        self.comp += if self.sum.abs() >= v.abs() { (self.sum - t) + v } else { (v - t) + self.sum };
        self.sum = t;
        self.abs += v.abs();
    }

    fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.comp);
        self.abs += other.abs - other.sum.abs() - other.comp.abs();
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// `|ŝ − s| ≤ 2u|s| + 2n u² Σ|v|` for compensated summation of `n` terms.
    fn rounding(&self, n: usize) -> f64 {
        let u = f64::EPSILON / 2.0;
        2.0 * u * self.value().abs() + 2.0 * n as f64 * u * u * self.abs
    }
}

/// Trapezoid rule for a `2π`-periodic integrand, returning the mean value.
pub fn periodic_mean<F>(f: F, opts: &QuadOptions) -> Quadrature
where
    F: Fn(f64) -> (f64, f64) + Sync,
{
    let eval = |n: usize, offset: usize, stride: usize| -> (Accumulator, f64) {
        let idx: Vec<usize> = (offset..n).step_by(stride).collect();
        let vals: Vec<(f64, f64)> = idx.par_iter().map(|&j| f(TAU * j as f64 / n as f64)).collect();
        vals.iter().fold((Accumulator::default(), 0.0), |(mut s, e), &(v, b)| {
            s.add(v);
            (s, e.max(b))
        })
    };
    let mut n = opts.min_points.max(4);
    let (mut sum, mut eval_err) = eval(n, 0, 1);
    let mut est = sum.value() / n as f64;
    loop {
        if 2 * n > opts.max_points {
            return Quadrature { value: est, error: f64::INFINITY, points: n, converged: false };
        }
        let (odd, e) = eval(2 * n, 1, 2);
        eval_err = eval_err.max(e);
        sum.merge(&odd);
        n *= 2;
        let next = sum.value() / n as f64;
        let diff = (next - est).abs();
        est = next;
        let error = diff + eval_err + sum.rounding(n) / n as f64;
        if diff <= opts.abs_tol.max(opts.rel_tol * est.abs()) {
            return Quadrature { value: est, error, points: n, converged: true };
        }
        if 2 * n > opts.max_points {
            return Quadrature { value: est, error, points: n, converged: false };
        }
    }
}

/// Moduli of poles (and, when `with_zeros`, zeros) within `clearance` of `log r`.
fn nearest_obstruction(model: &FunctionModel, log_r: f64, clearance: f64, with_zeros: bool) -> Result<Option<f64>> {
    let mut lists = Vec::new();
    if !model.is_entire() {
        lists.push(model.poles_upto(log_r + clearance + 1.0)?);
    }
    if with_zeros {
        lists.push(model.zeros_upto(log_r + clearance + 1.0)?);
    }
    let mut nearest: Option<f64> = None;
    for l in lists {
        if !l.complete {
            return Err(Error::UncertifiedRoots("zero list incomplete near the circle".into()));
        }
        for z in l.points {
            let d = (z.log_modulus - log_r).abs();
            if d < clearance && nearest.is_none_or(|n| d < (n - log_r).abs()) {
                nearest = Some(z.log_modulus);
            }
        }
    }
    Ok(nearest)
}

/// Shifted radius `log r + k·clearance/50`, `k ≤ 100`, clear of obstructions.
pub fn suggest_clear_radius(model: &FunctionModel, log_r: f64, clearance: f64, with_zeros: bool) -> Result<Option<f64>> {
    let step = clearance / 50.0;
    for k in 1..=100 {
        let x = log_r + step * k as f64;
        if nearest_obstruction(model, x, clearance, with_zeros)?.is_none() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn check_circle(model: &FunctionModel, log_r: f64, opts: &QuadOptions, with_zeros: bool) -> Result<()> {
    let clearance = opts.clearance();
    if nearest_obstruction(model, log_r, clearance, with_zeros)?.is_some() {
        let suggested = suggest_clear_radius(model, log_r, clearance, with_zeros)?.unwrap_or(f64::NAN);
        return Err(Error::PoleNearCircle { log_r, clearance, suggested_log_r: suggested });
    }
    Ok(())
}

fn log_plus(v: LogValue) -> (f64, f64) {
    if v.pole {
        return (f64::INFINITY, f64::INFINITY);
    }
    (v.log_plus(), v.error_bound)
}

/// `m(r, f) = (1/2π) ∫ log⁺|f(re^{iθ})| dθ`.
pub fn proximity(model: &FunctionModel, log_r: f64, opts: &QuadOptions) -> Result<Quadrature> {
    check_circle(model, log_r, opts, false)?;
    let c = model.circle(log_r)?;
    Ok(proximity_on(&c, opts))
}

pub fn proximity_on(c: &CircleEvaluator<'_>, opts: &QuadOptions) -> Quadrature {
    periodic_mean(|t| log_plus(c.eval(t)), opts)
}

/// `m(r, 1/f)`.
pub fn proximity_reciprocal(model: &FunctionModel, log_r: f64, opts: &QuadOptions) -> Result<Quadrature> {
    check_circle(model, log_r, opts, true)?;
    let c = model.circle(log_r)?;
    Ok(periodic_mean(
        |t| {
            let v = c.eval(t);
            if v.pole {
                (0.0, 0.0)
            } else {
                ((-v.log_abs).max(0.0), v.error_bound)
            }
        },
        opts,
    ))
}

/// Like [`proximity`], nudging the circle outward when a pole is too close; returns the radius used.
pub fn proximity_shifted(model: &FunctionModel, log_r: f64, opts: &QuadOptions) -> Result<(f64, Quadrature)> {
    match proximity(model, log_r, opts) {
        Err(Error::PoleNearCircle { suggested_log_r, .. }) if suggested_log_r.is_finite() => {
            Ok((suggested_log_r, proximity(model, suggested_log_r, opts)?))
        }
        other => other.map(|q| (log_r, q)),
    }
}

/// `m(r, f(qz)/f(z))` from differences of `log|f|` on the circles `r` and `|q| r`.
pub fn log_q_difference(model: &FunctionModel, q: Complex64, log_r: f64, opts: &QuadOptions) -> Result<Quadrature> {
    if q.norm() == 0.0 {
        return Err(Error::InvalidParameter("q must be nonzero".into()));
    }
    let lq = q.norm().ln();
    let aq = q.arg();
    check_circle(model, log_r, opts, true)?;
    check_circle(model, log_r + lq, opts, true)?;
    let inner = model.circle(log_r)?;
    let outer = model.circle(log_r + lq)?;
    Ok(periodic_mean(
        |t| {
            let a = outer.eval(t + aq);
            let b = inner.eval(t);
            if a.pole || b.log_abs == f64::NEG_INFINITY {
                return (f64::INFINITY, f64::INFINITY);
            }
            if b.pole || a.log_abs == f64::NEG_INFINITY {
                return (0.0, 0.0);
            }
            ((a.log_abs - b.log_abs).max(0.0), a.error_bound + b.error_bound)
        },
        opts,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::PowerSeries;
    use rug::{Complex, Float};
    use std::f64::consts::PI;

    fn exp_series(k: usize) -> FunctionModel {
        let mut c = Vec::new();
        let mut f = Float::with_val(256, 1);
        for j in 0..=k {
            if j > 0 {
                f /= j as u32;
            }
            c.push(Complex::with_val(256, (&f, 0)));
        }
        FunctionModel::PowerSeries(PowerSeries::new(c, vec![f64::NEG_INFINITY; k + 1], false).unwrap())
    }

    #[test]
    fn compensated_mean_of_a_large_offset() {
        // naive summation of 2^16 copies drifts by ~1e-10 here
        let q = periodic_mean(|t| (9725.0 + 1e-3 * t.cos(), 0.0), &QuadOptions::default());
        assert!((q.value - 9725.0).abs() <= 4.0 * f64::EPSILON * 9725.0, "{}", q.value);
        assert!(q.error < 1e-11, "{}", q.error);
    }

    #[test]
    fn identity_proximity_is_log_r() {
        let q = proximity(&FunctionModel::identity(), 1.0, &QuadOptions::default()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-14, "{q:?}");
    }

    #[test]
    fn exponential_at_unit_radius() {
        let q = proximity(&exp_series(60), 0.0, &QuadOptions::default()).unwrap();
        assert!(((q.value - 1.0 / PI) * PI).abs() < 1e-6, "{q:?}");
    }

    #[test]
    fn reciprocal_shift_against_dense_reference() {
        let f = FunctionModel::rational(&[1.0], &[-1.0, 1.0]).unwrap();
        let x = 2f64.ln();
        let q = proximity(&f, x, &QuadOptions::default()).unwrap();
        // midpoint rule with 10^6 points on log⁺ 1/|2e^{iθ} − 1|
        let n = 1_000_000;
        let reference: f64 = (0..n)
            .map(|j| {
                let t = TAU * (j as f64 + 0.5) / n as f64;
                (-(Complex64::from_polar(2.0, t) - 1.0).norm().ln()).max(0.0)
            })
            .sum::<f64>()
            / n as f64;
        assert!((q.value - reference).abs() < 1e-7, "{} vs {reference}", q.value);
    }

    #[test]
    fn pole_on_circle_suggests_shift() {
        let f = FunctionModel::rational(&[1.0], &[-1.0, 1.0]).unwrap();
        let err = proximity(&f, 1e-9, &QuadOptions::default()).unwrap_err();
        let Error::PoleNearCircle { suggested_log_r, clearance, .. } = err else { panic!("{err:?}") };
        assert!(suggested_log_r > clearance);
        assert!(proximity(&f, suggested_log_r, &QuadOptions::default()).is_ok());
    }

    #[test]
    fn q_difference_of_identity_is_log_plus_q() {
        for q in [Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 3.0)] {
            let m = log_q_difference(&FunctionModel::identity(), q, 0.7, &QuadOptions::default()).unwrap();
            assert!((m.value - q.norm().ln().max(0.0)).abs() < 1e-13, "{q} {m:?}");
        }
        let c = FunctionModel::polynomial(&[3.0]);
        let m = log_q_difference(&c, Complex64::new(2.0, 0.0), 1.0, &QuadOptions::default()).unwrap();
        assert_eq!(m.value, 0.0);
    }
}
