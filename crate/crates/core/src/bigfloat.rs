//! Helpers around `rug` floats: log-magnitudes, decimal text and the precision policy.

use rug::float::Round;
use rug::{Complex, Float};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 256;

/// `max(base, ⌈4·K·|log₂|q||⌉ + 128)` bits.
pub fn solver_precision(truncation: usize, q_abs: f64, base: u32) -> u32 {
    let need = (4.0 * truncation as f64 * q_abs.log2().abs()).ceil() as u64 + 128;
    base.max(need.min(u32::MAX as u64 / 2) as u32)
}

pub fn complex(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

/// `log |c|`, `−∞` at zero.
pub fn log_abs(c: &Complex) -> f64 {
    if c.real().is_zero() && c.imag().is_zero() {
        return f64::NEG_INFINITY;
    }
    let a = Float::with_val(c.prec().0.max(64), c.abs_ref());
    a.ln().to_f64()
}

/// `log |c|` from the binary exponents alone; relative accuracy about `1e-15`.
pub fn log_abs_fast(c: &Complex) -> f64 {
    let part = |f: &Float| {
        if f.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, e) = f.to_f64_exp();
        m.abs().ln() + e as f64 * std::f64::consts::LN_2
    };
    let (a, b) = (part(c.real()), part(c.imag()));
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + 0.5 * (2.0 * (lo - hi)).exp().ln_1p()
}

pub fn log_abs_real(f: &Float) -> f64 {
    if f.is_zero() {
        return f64::NEG_INFINITY;
    }
    Float::with_val(f.prec().max(64), f.abs_ref()).ln().to_f64()
}

pub fn arg(c: &Complex) -> f64 {
    if c.real().is_zero() && c.imag().is_zero() {
        return 0.0;
    }
    Float::with_val(64, c.arg_ref()).to_f64()
}

/// Decimal `(mantissa, exponent)` with `value = mantissa × 10^exponent` and `1 ≤ |mantissa| < 10`.
/// Uses enough digits to round-trip at the float's precision.
pub fn to_decimal(f: &Float) -> (String, i64) {
    if f.is_zero() {
        return ("0".to_string(), 0);
    }
    if !f.is_finite() {
        return (f.to_string(), 0);
    }
    let digits = ((f.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize + 2;
    let (neg, s, exp) = f.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    let exp = exp.unwrap_or(0) as i64 - 1;
    let s = s.trim_end_matches('0');
    let (head, tail) = s.split_at(1);
    let mut m = String::with_capacity(s.len() + 2);
    if neg {
        m.push('-');
    }
    m.push_str(head);
    if !tail.is_empty() {
        m.push('.');
        m.push_str(tail);
    }
    (m, exp)
}

pub fn from_decimal(mantissa: &str, exponent: i64, prec: u32) -> Result<Float> {
    let text = format!("{}e{}", mantissa.trim(), exponent);
    Float::parse(&text)
        .map(|p| Float::with_val(prec, p))
        .map_err(|e| Error::Parse(format!("bad decimal '{text}': {e}")))
}
