//! Truncated power series with big-float coefficients.

use std::f64::consts::{PI, TAU};

use rug::{Complex, Float};

use crate::bigfloat;
use crate::error::{Error, Result};
use crate::logspace::{log_add_exp, unit_roundoff, wrap_angle};

use super::{LogValue, Zero};

/// Terms more than this many nats below the largest are dropped in fast evaluation.
const CUTOFF: f64 = 60.0;

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex>,
    /// `log` of the absolute error bound of each coefficient.
    log_err: Vec<f64>,
    /// The series is an exact polynomial; no truncation-range restriction applies.
    exact: bool,
    prec: u32,
    log_abs: Vec<f64>,
    arg: Vec<f64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex>, log_err: Vec<f64>, exact: bool) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("power series needs at least one coefficient".into()));
        }
        if log_err.len() != coeffs.len() {
            return Err(Error::InvalidInput("error bound list length differs from coefficient list".into()));
        }
        let prec = coeffs.iter().map(|c| c.prec().0).max().unwrap_or(bigfloat::DEFAULT_PRECISION);
        let log_abs = coeffs.iter().map(bigfloat::log_abs).collect();
        let arg = coeffs.iter().map(bigfloat::arg).collect();
        Ok(Self { coeffs, log_err, exact, prec, log_abs, arg })
    }

    /// Exactly representable coefficients, no error.
    pub fn from_f64(coeffs: &[(f64, f64)], prec: u32, exact: bool) -> Result<Self> {
        let c: Vec<Complex> = coeffs.iter().map(|&(re, im)| bigfloat::complex(prec, re, im)).collect();
        let n = c.len();
        Self::new(c, vec![f64::NEG_INFINITY; n], exact)
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn log_errors(&self) -> &[f64] {
        &self.log_err
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn log_abs_coeff(&self, k: usize) -> f64 {
        self.log_abs[k]
    }

    pub fn valuation(&self) -> usize {
        self.log_abs.iter().zip(&self.log_err).take_while(|(a, e)| **a == f64::NEG_INFINITY && **e == f64::NEG_INFINITY).count()
    }

    /// `max_k (log|c_k| + k·x)` and its first maximizing index.
    pub fn envelope(&self, x: f64) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0usize);
        for (k, &la) in self.log_abs.iter().enumerate() {
            let t = la + k as f64 * x;
            if t > best.0 {
                best = (t, k);
            }
        }
        best
    }

    /// `log Σ |c_k| r^k`, an upper bound for `log M(r)`.
    pub fn log_abs_sum(&self, x: f64) -> f64 {
        self.log_abs.iter().enumerate().fold(f64::NEG_INFINITY, |acc, (k, &la)| log_add_exp(acc, la + k as f64 * x))
    }

    /// Largest `log r` whose envelope maximizer stays at or below `frac·K`.
    pub fn max_usable_log_r(&self, frac: f64) -> f64 {
        if self.exact {
            return f64::INFINITY;
        }
        let kt = (frac * self.truncation() as f64).floor() as usize;
        let over = |x: f64| self.envelope(x).1 > kt;
        let mut lo = -50.0;
        if over(lo) {
            return f64::NEG_INFINITY;
        }
        let mut hi = 1.0;
        while !over(hi) {
            hi *= 2.0;
            if hi > 1e12 {
                return f64::INFINITY;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if over(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-12 * hi.abs().max(1.0) {
                break;
            }
        }
        lo
    }

    /// Fast `f64` evaluation in log-space, falling back to working precision when the
    /// fast bound is too loose.
    pub fn eval_log(&self, x: f64, theta: f64) -> LogValue {
        let (m, _) = self.envelope(x);
        if m == f64::NEG_INFINITY {
            return LogValue::zero();
        }
        let u = unit_roundoff();
        let mut re = 0.0;
        let mut im = 0.0;
        let mut mag = 0.0;
        let mut round = 0.0;
        let mut dropped = 0usize;
        let mut coeff_err = 0.0;
        for (k, (&la, &ph)) in self.log_abs.iter().zip(&self.arg).enumerate() {
            let kf = k as f64;
            let le = self.log_err[k];
            if le > f64::NEG_INFINITY {
                coeff_err += (le + kf * x - m).exp();
            }
            if la == f64::NEG_INFINITY {
                continue;
            }
            let t = la + kf * x - m;
            if t < -CUTOFF {
                dropped += 1;
                continue;
            }
            let w = t.exp();
            let phase = ph + kf * theta;
            re += w * phase.cos();
            im += w * phase.sin();
            mag += w;
            round += w * ((la.abs() + kf * x.abs() + ph.abs() + kf * theta.abs()) * 2.0 * u + 4.0 * u);
        }
        let abs = re.hypot(im);
        let bound = round + 2.0 * (self.coeffs.len() as f64) * u * mag + dropped as f64 * (-CUTOFF).exp() + coeff_err;
        let rel = if abs > 0.0 { bound / abs } else { f64::INFINITY };
        if rel < 0.01 {
            return LogValue { log_abs: m + abs.ln(), arg: im.atan2(re), error_bound: -(1.0 - rel).ln(), pole: false };
        }
        self.eval_log_hp(x, theta)
    }

    /// Horner evaluation at working precision.
    pub fn eval_hp(&self, z: &Complex) -> Complex {
        let prec = self.prec.max(z.prec().0);
        let mut acc = Complex::with_val(prec, 0);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    pub fn eval_log_hp(&self, x: f64, theta: f64) -> LogValue {
        let prec = self.prec.max(128) + 64;
        let z = Complex::with_val(prec, (x, theta)).exp();
        let v = self.eval_hp(&z);
        let la = bigfloat::log_abs(&v);
        let n = self.coeffs.len() as f64;
        let mut log_bound = ((2.0 * n + 2.0).ln() - prec as f64 * std::f64::consts::LN_2) + self.log_abs_sum(x);
        for (k, &le) in self.log_err.iter().enumerate() {
            log_bound = log_add_exp(log_bound, le + k as f64 * x);
        }
        let rel = (log_bound - la).exp();
        let error_bound = if la == f64::NEG_INFINITY {
            if log_bound == f64::NEG_INFINITY { 0.0 } else { f64::INFINITY }
        } else if rel < 1.0 {
            -(1.0 - rel).ln()
        } else {
            f64::INFINITY
        };
        LogValue { log_abs: la, arg: bigfloat::arg(&v), error_bound, pole: false }
    }

    pub fn derivative(&self) -> PowerSeries {
        if self.coeffs.len() == 1 {
            let zero = Complex::with_val(self.prec, 0);
            return PowerSeries::new(vec![zero], vec![f64::NEG_INFINITY], self.exact).expect("non-empty");
        }
        let coeffs: Vec<Complex> =
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| Complex::with_val(self.prec, c * k as u32)).collect();
        let log_err = self.log_err.iter().enumerate().skip(1).map(|(k, e)| e + (k as f64).ln()).collect();
        PowerSeries::new(coeffs, log_err, self.exact).expect("non-empty")
    }

    /// Winding number of `f` around the circle `|z| = e^x`, or `None` when sampling cannot certify it.
    pub fn winding(&self, x: f64) -> Option<i64> {
        let mut n = 256usize;
        while n <= 1 << 15 {
            let vals: Vec<LogValue> = (0..n).map(|j| self.eval_log(x, TAU * j as f64 / n as f64)).collect();
            if vals.iter().any(|v| !v.log_abs.is_finite() || v.error_bound > 0.05) {
                return None;
            }
            let mut total = 0.0;
            let mut worst = 0.0f64;
            for j in 0..n {
                let d = wrap_angle(vals[(j + 1) % n].arg - vals[j].arg);
                worst = worst.max(d.abs());
                total += d;
            }
            if worst <= PI / 4.0 {
                let w = total / TAU;
                let k = w.round();
                return ((w - k).abs() < 0.05).then_some(k as i64);
            }
            n *= 2;
        }
        None
    }

    /// Zeros with modulus at most `e^{log_r}`, located by counting on circles and bisecting
    /// in `log r`. The flag is `true` when every count was certified and the located
    /// multiplicities add up to the count on the outer circle.
    pub fn zeros_upto(&self, log_r: f64) -> Result<(Vec<Zero>, bool)> {
        let v = self.valuation();
        let mut out = Vec::new();
        if v == self.coeffs.len() {
            return Err(Error::InvalidInput("identically zero series has no isolated zeros".into()));
        }
        if v > 0 {
            out.push(Zero { log_modulus: f64::NEG_INFINITY, arg: 0.0, multiplicity: v as u32 });
        }
        let Some(outer) = self.winding_nudged(log_r) else {
            return Ok((out, false));
        };
        let total = (outer - v as i64).max(0) as u32;
        if total == 0 {
            return Ok((out, true));
        }
        let mut lo = log_r - 1.0;
        let mut lo_count = None;
        for _ in 0..60 {
            match self.winding_nudged(lo) {
                Some(c) if c as usize == v => {
                    lo_count = Some(c);
                    break;
                }
                _ => lo -= 2.0,
            }
        }
        let Some(lo_count) = lo_count else {
            return Ok((out, false));
        };
        let mut found = 0u32;
        let mut stack = vec![(lo, log_r, lo_count, outer)];
        while let Some((a, b, na, nb)) = stack.pop() {
            if na == nb {
                continue;
            }
            if b - a < 1e-9 * b.abs().max(1.0) {
                let m = (nb - na) as u32;
                found += m;
                out.push(Zero { log_modulus: 0.5 * (a + b), arg: f64::NAN, multiplicity: m });
                continue;
            }
            // circles through or very near a zero cannot be certified; try other interior points
            let split = [0.5, 0.3, 0.7, 0.15, 0.85]
                .iter()
                .map(|t| a + t * (b - a))
                .find_map(|mid| self.winding(mid).map(|nm| (mid, nm)));
            match split {
                Some((mid, nm)) => {
                    stack.push((mid, b, nm, nb));
                    stack.push((a, mid, na, nm));
                }
                None => {
                    let m = (nb - na) as u32;
                    found += m;
                    out.push(Zero { log_modulus: 0.5 * (a + b), arg: f64::NAN, multiplicity: m });
                }
            }
        }
        out.sort_by(|p, q| p.log_modulus.total_cmp(&q.log_modulus));
        Ok((out, found == total))
    }

    fn winding_nudged(&self, x: f64) -> Option<i64> {
        (0..8).find_map(|k| self.winding(x + 1e-7 * k as f64 * x.abs().max(1.0)))
    }

    /// Parses CSV rows `(index, mantissa, exponent[, error, im_mantissa, im_exponent])`.
    pub fn from_decimal_rows(rows: &[DecimalCoeff], prec: u32, exact: bool) -> Result<Self> {
        let n = rows.iter().map(|r| r.index + 1).max().unwrap_or(0);
        if n == 0 {
            return Err(Error::InvalidInput("empty coefficient table".into()));
        }
        let mut coeffs = vec![Complex::with_val(prec, 0); n];
        let mut log_err = vec![f64::NEG_INFINITY; n];
        for r in rows {
            let re = bigfloat::from_decimal(&r.mantissa, r.exponent, prec)?;
            let im = match (&r.im_mantissa, r.im_exponent) {
                (Some(m), Some(e)) => bigfloat::from_decimal(m, e, prec)?,
                _ => Float::with_val(prec, 0),
            };
            coeffs[r.index] = Complex::with_val(prec, (re, im));
            if let Some(e) = r.error_bound {
                log_err[r.index] = if e > 0.0 { e.ln() } else { f64::NEG_INFINITY };
            }
        }
        Self::new(coeffs, log_err, exact)
    }

    pub fn to_decimal_rows(&self) -> Vec<DecimalCoeff> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let (m, e) = bigfloat::to_decimal(c.real());
                let (im_m, im_e) = if c.imag().is_zero() {
                    (None, None)
                } else {
                    let (a, b) = bigfloat::to_decimal(c.imag());
                    (Some(a), Some(b))
                };
                DecimalCoeff {
                    index: k,
                    mantissa: m,
                    exponent: e,
                    error_bound: Some(self.log_err[k].exp()),
                    im_mantissa: im_m,
                    im_exponent: im_e,
                }
            })
            .collect()
    }
}

/// One coefficient row as stored in CSV files.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DecimalCoeff {
    pub index: usize,
    pub mantissa: String,
    pub exponent: i64,
    #[serde(default)]
    pub error_bound: Option<f64>,
    #[serde(default)]
    pub im_mantissa: Option<String>,
    #[serde(default)]
    pub im_exponent: Option<i64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_series(k: usize) -> PowerSeries {
        let mut c = Vec::with_capacity(k + 1);
        let mut f = Float::with_val(256, 1);
        for j in 0..=k {
            if j > 0 {
                f /= j as u32;
            }
            c.push(Complex::with_val(256, (&f, 0)));
        }
        let n = c.len();
        PowerSeries::new(c, vec![f64::NEG_INFINITY; n], false).unwrap()
    }

    #[test]
    fn exp_values() {
        let s = exp_series(60);
        let v = s.eval_log(0.0, 0.0);
        assert!((v.log_abs - 1.0).abs() < 1e-14);
        let v = s.eval_log(0.0, PI);
        assert!((v.log_abs + 1.0).abs() < 1e-13);
        let v = s.eval_log(1.0, 0.5);
        // log|e^z| = Re z = e cos(0.5)
        assert!((v.log_abs - std::f64::consts::E * 0.5f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn cancellation_falls_back_to_high_precision() {
        let s = exp_series(120);
        // e^{-20}: terms up to 20^20/20! ~ 4e7 cancel to 2e-9
        let v = s.eval_log(20f64.ln(), PI);
        assert!((v.log_abs + 20.0).abs() < 1e-9, "{v:?}");
    }

    #[test]
    fn derivative_of_z() {
        let s = PowerSeries::from_f64(&[(0.0, 0.0), (1.0, 0.0)], 64, true).unwrap();
        let d = s.derivative();
        assert_eq!(d.coeffs().len(), 1);
        assert_eq!(d.coeffs()[0], Complex::with_val(64, 1));
    }

    #[test]
    fn zeros_of_quadratic_by_winding() {
        // z² + z − 6 = (z − 2)(z + 3)
        let s = PowerSeries::from_f64(&[(-6.0, 0.0), (1.0, 0.0), (1.0, 0.0)], 128, true).unwrap();
        let (z, complete) = s.zeros_upto(4f64.ln()).unwrap();
        assert!(complete, "{z:?}");
        assert_eq!(z.len(), 2);
        // moduli are bracketed to the argument-sampling resolution
        assert!((z[0].log_modulus - 2f64.ln()).abs() < 1e-4, "{z:?}");
        assert!((z[1].log_modulus - 3f64.ln()).abs() < 1e-4);
        let (z, complete) = s.zeros_upto(2.5f64.ln()).unwrap();
        assert!(complete && z.len() == 1);
    }

    #[test]
    fn envelope_dominance_limit() {
        // c_k = 2^{-k(k+1)/2}
        let c: Vec<Complex> = (0..=100u32).map(|k| Complex::with_val(256, (Float::with_val(256, 1) >> (k * (k + 1) / 2), 0))).collect();
        let s = PowerSeries::new(c, vec![f64::NEG_INFINITY; 101], false).unwrap();
        let x = s.max_usable_log_r(0.8);
        // k* ≈ x/ln2 − 1/2 reaches 80 near x = 80.5 ln 2
        assert!((x - 80.5 * std::f64::consts::LN_2).abs() < 0.5, "{x}");
        assert!(s.envelope(x).1 <= 80);
    }

    #[test]
    fn decimal_rows_roundtrip() {
        let s = exp_series(10);
        let rows = s.to_decimal_rows();
        let back = PowerSeries::from_decimal_rows(&rows, 256, false).unwrap();
        assert_eq!(back.coeffs(), s.coeffs());
    }
}
