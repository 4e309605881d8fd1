//! Power-series solutions at the origin by the triangular recurrence
//! `c_k E(k,0) = (a_{n+1})_k − Σ_{l<k} c_l E(l, k−l)`, `E(l,m) = Σ_j a_{j,m} q^{jl}`.

use std::f64::consts::{LN_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use rug::Complex;
use serde::{Deserialize, Serialize};

use crate::bigfloat::{self, log_abs_fast};
use crate::error::{Error, Result};
use crate::grid::RadiusGrid;
use crate::logspace::log_add_exp;
use crate::models::{DecimalCoeff, FunctionModel, Poly, PowerSeries};

use super::equation::QDifferenceEquation;

/// Taylor coefficients of one equation coefficient at working precision.
struct Row {
    vals: Vec<Complex>,
    log_abs: Vec<f64>,
    log_err: Vec<f64>,
    /// The row is the complete expansion (a polynomial); otherwise it is cut at `vals.len()`.
    finite: bool,
}

impl Row {
    fn get(&self, m: usize) -> Option<(&Complex, f64, f64)> {
        (m < self.vals.len()).then(|| (&self.vals[m], self.log_abs[m], self.log_err[m]))
    }
}

fn poly_row(p: &Poly, scale: Complex64, prec: u32) -> Row {
    let unit = scale == Complex64::new(1.0, 0.0);
    let scaled: Vec<Complex64> = p.coeffs().iter().map(|c| c * scale).collect();
    let vals: Vec<Complex> = scaled.iter().map(|v| Complex::with_val(prec, (v.re, v.im))).collect();
    let log_abs = vals.iter().map(log_abs_fast).collect();
    // dividing by a constant denominator in f64 is the only rounding
    let log_err = scaled.iter().map(|v| if unit { f64::NEG_INFINITY } else { v.norm().ln() + f64::EPSILON.ln() }).collect();
    Row { vals, log_abs, log_err, finite: true }
}

/// Taylor expansion of `p/d` up to index `len − 1`; needs `d(0) ≠ 0`.
fn rational_row(p: &Poly, d: &Poly, len: usize, prec: u32) -> Result<Row> {
    let dc = d.coeffs();
    if dc[0].norm() == 0.0 {
        return Err(Error::Domain("coefficient has a pole at the origin; clear denominators first".into()));
    }
    let to = |c: Complex64| Complex::with_val(prec, (c.re, c.im));
    let d0 = to(dc[0]);
    let ld0 = dc[0].norm().ln();
    let mut vals: Vec<Complex> = Vec::with_capacity(len);
    let mut abs_bound: Vec<f64> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = to(p.coeffs().get(k).copied().unwrap_or_default());
        let mut lb = p.coeffs().get(k).map_or(f64::NEG_INFINITY, |c| c.norm().ln());
        for i in 1..dc.len().min(k + 1) {
            acc -= Complex::with_val(prec, &vals[k - i] * &to(dc[i]));
            lb = log_add_exp(lb, dc[i].norm().ln() + abs_bound[k - i]);
        }
        vals.push(Complex::with_val(prec, &acc / &d0));
        abs_bound.push(lb - ld0);
    }
    let lu = (1 - prec as i64) as f64 * LN_2;
    let log_abs = vals.iter().map(log_abs_fast).collect();
    let log_err = abs_bound.iter().enumerate().map(|(k, b)| b + lu + (((k + 2) * (dc.len() + 1)) as f64).ln()).collect();
    Ok(Row { vals, log_abs, log_err, finite: false })
}

fn model_row(m: &FunctionModel, len: usize, prec: u32, warnings: &mut Vec<String>, name: &str) -> Result<Row> {
    match m {
        FunctionModel::Rational(r) if r.is_polynomial() => Ok(poly_row(r.numer(), Complex64::new(1.0, 0.0) / r.denom().coeffs()[0], prec)),
        FunctionModel::Rational(r) => rational_row(r.numer(), r.denom(), len, prec),
        FunctionModel::PowerSeries(s) => {
            if !s.is_exact() && s.truncation() + 1 < len {
                warnings.push(format!("{name} is truncated at index {}; later coefficients are taken as zero", s.truncation()));
            }
            let vals: Vec<Complex> = s.coeffs().iter().take(len).map(|c| Complex::with_val(prec, c)).collect();
            let log_abs = vals.iter().map(log_abs_fast).collect();
            let log_err = s.log_errors().iter().take(len).copied().collect();
            Ok(Row { vals, log_abs, log_err, finite: s.is_exact() })
        }
        other => Err(Error::UnsupportedVariant(format!("{name} is a {} model", other.variant_name()))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Working precision in bits; defaults to the precision policy for `K` and `|q|`.
    pub precision: Option<u32>,
    /// Re-solve once at doubled precision when a divisor is ill-conditioned.
    pub auto_raise: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { precision: None, auto_raise: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSolution {
    pub q: Complex64,
    pub truncation: usize,
    pub precision: u32,
    pub coeffs: Vec<Complex>,
    /// `log` of the absolute error bound of each coefficient.
    pub log_errors: Vec<f64>,
    /// Indices where `E(k,0)` vanished within precision; `c_k` was set free there.
    pub resonance_indices: Vec<usize>,
    /// The value given for a free `c_0`.
    pub normalization: Option<Complex64>,
    pub warnings: Vec<String>,
    /// The recurrence terminates: the solution is this polynomial.
    pub exact: bool,
}

impl SeriesSolution {
    pub fn log_abs_coeff(&self, k: usize) -> f64 {
        log_abs_fast(&self.coeffs[k])
    }

    pub fn to_series(&self) -> Result<PowerSeries> {
        PowerSeries::new(self.coeffs.clone(), self.log_errors.clone(), self.exact)
    }

    pub fn to_model(&self) -> Result<FunctionModel> {
        Ok(FunctionModel::PowerSeries(self.to_series()?))
    }

    /// Rows `(index, mantissa, exponent, error bound)` for CSV export.
    pub fn to_decimal_rows(&self) -> Result<Vec<DecimalCoeff>> {
        Ok(self.to_series()?.to_decimal_rows())
    }

    /// Copy with `c_k` replaced; used to probe the residual.
    pub fn with_coefficient(&self, k: usize, value: Complex) -> Self {
        let mut out = self.clone();
        out.coeffs[k] = value;
        out
    }
}

pub fn solve_series(eq: &QDifferenceEquation, truncation: usize, c0: Option<Complex64>) -> Result<SeriesSolution> {
    solve_series_with(eq, truncation, c0, &SolveOptions::default())
}

pub fn solve_series_with(eq: &QDifferenceEquation, truncation: usize, c0: Option<Complex64>, opts: &SolveOptions) -> Result<SeriesSolution> {
    let prec = opts.precision.unwrap_or_else(|| bigfloat::solver_precision(truncation, eq.q().norm(), bigfloat::DEFAULT_PRECISION));
    let first = solve_at(eq, truncation, c0, prec)?;
    if opts.auto_raise && first.1 {
        let (mut sol, still) = solve_at(eq, truncation, c0, prec * 2)?;
        sol.warnings.push(format!("precision raised from {prec} to {} bits after an ill-conditioned divisor", prec * 2));
        if still {
            sol.warnings.push("divisors remain ill-conditioned at the raised precision".into());
        }
        return Ok(sol);
    }
    Ok(first.0)
}

/// Returns the solution and whether an ill-conditioned divisor was met.
fn solve_at(eq: &QDifferenceEquation, kmax: usize, c0: Option<Complex64>, prec: u32) -> Result<(SeriesSolution, bool)> {
    let len = kmax + 1;
    let mut warnings = Vec::new();
    let mut rows: Vec<Row> = eq
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, a)| model_row(a, len, prec, &mut warnings, &format!("a_{j}")))
        .collect::<Result<_>>()?;
    let mut rhs = model_row(eq.rhs(), len, prec, &mut warnings, "the right-hand side")?;

    // a common factor z^v of all coefficients is divided out
    let val = |r: &Row| r.vals.iter().position(|c| !(c.real().is_zero() && c.imag().is_zero())).unwrap_or(usize::MAX);
    let v = rows.iter().map(val).min().unwrap_or(0);
    if v > 0 && v != usize::MAX {
        let rv = val(&rhs);
        if rv < v {
            return Err(Error::InconsistentEquation { index: rv });
        }
        for r in rows.iter_mut().chain(std::iter::once(&mut rhs)) {
            let cut = v.min(r.vals.len());
            r.vals.drain(..cut);
            r.log_abs.drain(..cut);
            r.log_err.drain(..cut);
        }
        warnings.push(format!("common factor z^{v} divided out of the equation"));
    }

    let n = rows.len();
    let depth = rows.iter().map(|r| r.vals.len()).max().unwrap_or(1).saturating_sub(1);
    let lq = eq.q().norm().ln();
    let q = Complex::with_val(prec, (eq.q().re, eq.q().im));
    let lu = (1 - prec as i64) as f64 * LN_2;
    let l_round = lu + ((n + 3) as f64).ln();

    // q^{jl} for the l in the current window
    let qpow_row = |ql: &Complex| -> Vec<Complex> {
        let mut out = Vec::with_capacity(n);
        let mut p = Complex::with_val(prec, 1);
        for _ in 0..n {
            out.push(p.clone());
            p *= ql;
        }
        out
    };
    // E(l, m) with its absolute-value sum and error, in logs
    let e_val = |qp: &[Complex], l: usize, m: usize| -> (Complex, f64, f64) {
        let mut acc = Complex::with_val(prec, 0);
        let (mut labs, mut lerr) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (j, r) in rows.iter().enumerate() {
            if let Some((a, la, le)) = r.get(m) {
                if la == f64::NEG_INFINITY && le == f64::NEG_INFINITY {
                    continue;
                }
                acc += Complex::with_val(prec, a * &qp[j]);
                let sh = (j * l) as f64 * lq;
                labs = log_add_exp(labs, la + sh);
                lerr = log_add_exp(lerr, le + sh);
            }
        }
        (acc, labs, log_add_exp(lerr, l_round + labs))
    };

    let mut qpows: Vec<Vec<Complex>> = Vec::with_capacity(len);
    let mut ql = Complex::with_val(prec, 1);
    let mut coeffs: Vec<Complex> = Vec::with_capacity(len);
    let mut lc: Vec<f64> = Vec::with_capacity(len);
    let mut lerr: Vec<f64> = Vec::with_capacity(len);
    let mut resonances = Vec::new();
    let mut ill = false;
    let mut normalization = None;
    let l_terms = lu + ((depth + 2) as f64).ln();
    for k in 0..len {
        qpows.push(qpow_row(&ql));
        ql *= &q;
        let mut s = match rhs.get(k) {
            Some((c, _, _)) => c.clone(),
            None => Complex::with_val(prec, 0),
        };
        let (mut ls_err, mut ls_abs) = rhs.get(k).map_or((f64::NEG_INFINITY, f64::NEG_INFINITY), |(_, la, le)| (le, la));
        for l in k.saturating_sub(depth)..k {
            if lc[l] == f64::NEG_INFINITY && lerr[l] == f64::NEG_INFINITY {
                continue;
            }
            let (e, labs, le) = e_val(&qpows[l], l, k - l);
            if labs == f64::NEG_INFINITY && le == f64::NEG_INFINITY {
                continue;
            }
            s -= Complex::with_val(prec, &coeffs[l] * &e);
            let term_abs = lc[l] + labs;
            ls_abs = log_add_exp(ls_abs, term_abs);
            ls_err = log_add_exp(ls_err, log_add_exp(lerr[l] + labs, lc[l] + le));
        }
        ls_err = log_add_exp(ls_err, l_terms + ls_abs);
        let (e0, labs0, le0) = e_val(&qpows[k], k, 0);
        let le0_abs = log_abs_fast(&e0);
        let ls = log_abs_fast(&s);
        let resonant = le0_abs == f64::NEG_INFINITY || le0_abs <= le0 + 2f64.ln();
        if resonant {
            if ls != f64::NEG_INFINITY && ls > ls_err + 2f64.ln() {
                return Err(Error::InconsistentEquation { index: k });
            }
            resonances.push(k);
            let free = if k == 0 { c0 } else { None };
            if k == 0 {
                normalization = c0;
            }
            let fv = free.unwrap_or_default();
            let c = Complex::with_val(prec, (fv.re, fv.im));
            lc.push(log_abs_fast(&c));
            lerr.push(f64::NEG_INFINITY);
            coeffs.push(c);
            continue;
        }
        if k == 0 && c0.is_some() {
            warnings.push("c_0 is determined by the equation; the normalization was ignored".into());
        }
        if le0_abs - labs0 < -(prec as f64) * 0.5 * LN_2 {
            ill = true;
            warnings.push(format!("ill-conditioned divisor at k = {k}: |E(k,0)| / Σ|terms| = e^{:.1}", le0_abs - labs0));
        }
        let c = Complex::with_val(prec, &s / &e0);
        let lck = log_abs_fast(&c);
        // first-order propagation through the division
        let mut le_k = log_add_exp(ls_err - le0_abs, le0 + lck - le0_abs);
        le_k = log_add_exp(le_k, lu + lck);
        coeffs.push(c);
        lc.push(lck);
        lerr.push(le_k);
    }
    let exact = rows.iter().all(|r| r.finite) && rhs.finite && {
        let rdeg = rhs.vals.iter().rposition(|c| !(c.real().is_zero() && c.imag().is_zero()));
        let tail = depth.max(1);
        let tail_zero = coeffs.len() > tail && coeffs[coeffs.len() - tail..].iter().zip(&lerr[lerr.len() - tail..]).all(|(c, e)| {
            c.real().is_zero() && c.imag().is_zero() && *e == f64::NEG_INFINITY
        });
        tail_zero && rdeg.map_or(true, |d| d + tail < kmax)
    };
    if exact {
        let last = coeffs.iter().rposition(|c| !(c.real().is_zero() && c.imag().is_zero())).unwrap_or(0);
        coeffs.truncate(last + 1);
        lerr.truncate(last + 1);
    }
    Ok((
        SeriesSolution {
            q: eq.q(),
            truncation: kmax,
            precision: prec,
            coeffs,
            log_errors: lerr,
            resonance_indices: resonances,
            normalization,
            warnings,
            exact,
        },
        ill,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub log_r: f64,
    /// `max_θ log|Σ a_j(z) f(q^j z) − a_{n+1}(z)|`.
    pub max_log_residual: f64,
    /// `max_θ max_j log|a_j(z) f(q^j z)|`, the size of the cancelling terms.
    pub log_scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
    pub max_log_residual: f64,
    /// Largest `log r` at which every shifted argument stays in the certified range.
    pub max_usable_log_r: f64,
}

fn horner_poly(p: &Poly, z: &Complex) -> Complex {
    let prec = z.prec().0;
    let mut acc = Complex::with_val(prec, 0);
    for c in p.coeffs().iter().rev() {
        acc *= z;
        acc += Complex::with_val(prec, (c.re, c.im));
    }
    acc
}

fn horner(coeffs: &[Complex], z: &Complex) -> Complex {
    let mut acc = Complex::with_val(z.prec().0, 0);
    for c in coeffs.iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

fn eval_model_hp(m: &FunctionModel, z: &Complex) -> Result<Complex> {
    match m {
        FunctionModel::Rational(r) => {
            let num = horner_poly(r.numer(), z);
            if r.is_polynomial() {
                let d = r.denom().coeffs()[0];
                return Ok(num / Complex::with_val(z.prec().0, (d.re, d.im)));
            }
            Ok(num / horner_poly(r.denom(), z))
        }
        FunctionModel::PowerSeries(s) => Ok(s.eval_hp(z)),
        other => Err(Error::UnsupportedVariant(format!("cannot evaluate a {} model at high precision", other.variant_name()))),
    }
}

/// Maximum residual of the equation on `thetas` equally spaced points of each circle.
pub fn residual(eq: &QDifferenceEquation, sol: &SeriesSolution, grid: &RadiusGrid, thetas: usize) -> Result<ResidualReport> {
    let model = sol.to_model()?;
    let lq = eq.q().norm().ln();
    let shift = (0..=eq.order()).map(|j| j as f64 * lq).fold(0.0, f64::max);
    let max_usable_log_r = model.max_log_r() - shift;
    for &x in grid.log_r() {
        if x > max_usable_log_r {
            return Err(Error::RadiusOutOfRange { log_r: x, max_log_r: max_usable_log_r });
        }
        for a in eq.all_models() {
            if x > a.max_log_r() {
                return Err(Error::RadiusOutOfRange { log_r: x, max_log_r: a.max_log_r() });
            }
        }
    }
    let prec = sol.precision + 64;
    let q = Complex::with_val(prec, (eq.q().re, eq.q().im));
    let thetas = thetas.max(1);
    let points: Vec<(usize, f64)> =
        (0..grid.len()).flat_map(|i| (0..thetas).map(move |t| (i, TAU * t as f64 / thetas as f64))).collect();
    let vals: Vec<(usize, f64, f64)> = points
        .par_iter()
        .map(|&(i, t)| -> Result<(usize, f64, f64)> {
            let z = Complex::with_val(prec, (grid.log_r()[i], t)).exp();
            let mut zj = z.clone();
            let mut acc = Complex::with_val(prec, 0);
            let mut scale = f64::NEG_INFINITY;
            for a in eq.coeffs() {
                let term = eval_model_hp(a, &z)? * horner(&sol.coeffs, &zj);
                scale = scale.max(log_abs_fast(&term));
                acc += &term;
                zj *= &q;
            }
            let g = eval_model_hp(eq.rhs(), &z)?;
            scale = scale.max(log_abs_fast(&g));
            acc -= &g;
            Ok((i, log_abs_fast(&acc), scale))
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<ResidualRow> = grid
        .log_r()
        .iter()
        .map(|&x| ResidualRow { log_r: x, max_log_residual: f64::NEG_INFINITY, log_scale: f64::NEG_INFINITY })
        .collect();
    for (i, r, s) in vals {
        rows[i].max_log_residual = rows[i].max_log_residual.max(r);
        rows[i].log_scale = rows[i].log_scale.max(s);
    }
    let max_log_residual = rows.iter().map(|r| r.max_log_residual).fold(f64::NEG_INFINITY, f64::max);
    Ok(ResidualReport { rows, max_log_residual, max_usable_log_r })
}
