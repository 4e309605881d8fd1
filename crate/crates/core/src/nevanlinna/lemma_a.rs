//! Explicit upper bound for the logarithmic q-difference `m(r, f(qz)/f(z))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{FunctionModel, PointKind};

use super::characteristic::{characteristic_at, counting};
use super::quadrature::{log_q_difference, QuadOptions};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaAInputs {
    /// `n(λ, f)`: poles in `|z| ≤ λ`.
    pub n_f: f64,
    /// `n(λ, 1/f)`: zeros in `|z| ≤ λ`.
    pub n_1f: f64,
    pub t_lambda: f64,
    /// `log|f(0)|`.
    pub log_f0: f64,
    pub r: f64,
    pub lambda: f64,
    pub q: Complex64,
    pub delta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaABound {
    pub counting_term: f64,
    pub characteristic_term: f64,
    pub total: f64,
}

pub fn lemma_a_bound(inp: &LemmaAInputs) -> Result<LemmaABound> {
    let LemmaAInputs { n_f, n_1f, t_lambda, log_f0, r, lambda, q, delta } = *inp;
    let aq = q.norm();
    if aq == 0.0 {
        return Err(Error::InvalidParameter("q must be nonzero".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("δ = {delta} outside (0, 1)")));
    }
    if !(r > 0.0) || !(lambda > r.max(aq * r)) {
        return Err(Error::Domain(format!("need λ > max(r, |q|r); got λ = {lambda}, r = {r}, |q| = {aq}")));
    }
    let d = (q - 1.0).norm();
    let first = d.powf(delta) * (aq.powf(delta) + 1.0) / (delta * (1.0 - delta) * aq.powf(delta))
        + d * r / (lambda - aq * r)
        + d * r / (lambda - r);
    let counting_term = (n_f + n_1f) * first;
    let characteristic_term =
        4.0 * d * r * lambda / ((lambda - r) * (lambda - aq * r)) * (t_lambda + (-log_f0).max(0.0));
    Ok(LemmaABound { counting_term, characteristic_term, total: counting_term + characteristic_term })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaAComparison {
    pub inputs: LemmaAInputs,
    /// Quadrature value of `m(r, f(qz)/f(z))` and its error.
    pub lhs: f64,
    pub lhs_error: f64,
    pub bound: LemmaABound,
    /// `bound − (lhs + error)`.
    pub margin: f64,
}

/// Gathers the inputs of the bound from `model` and compares it with the quadrature.
pub fn lemma_a_check(model: &FunctionModel, r: f64, lambda: f64, q: Complex64, delta: f64, opts: &QuadOptions) -> Result<LemmaAComparison> {
    let origin = model.origin_term().ok_or_else(|| Error::UnsupportedVariant("f(0) unavailable".into()))?;
    if origin.order != 0 {
        return Err(Error::Domain("the bound needs f(0) ≠ 0, ∞".into()));
    }
    let ll = lambda.ln();
    let zeros = counting(model, ll, PointKind::Zeros)?;
    let poles = counting(model, ll, PointKind::Poles)?;
    let t = characteristic_at(model, ll, opts)?;
    let inputs = LemmaAInputs {
        n_f: poles.n as f64,
        n_1f: zeros.n as f64,
        t_lambda: t.t,
        log_f0: origin.log_abs_coeff,
        r,
        lambda,
        q,
        delta,
    };
    let bound = lemma_a_bound(&inputs)?;
    let m = log_q_difference(model, q, r.ln(), opts)?;
    Ok(LemmaAComparison { inputs, lhs: m.value, lhs_error: m.error, bound, margin: bound.total - (m.value + m.error) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> LemmaAInputs {
        LemmaAInputs { n_f: 0.0, n_1f: 0.0, t_lambda: 0.0, log_f0: 0.0, r: 1.0, lambda: 10.0, q: Complex64::new(2.0, 0.0), delta: 0.5 }
    }

    #[test]
    fn vanishing_inputs_give_zero() {
        assert_eq!(lemma_a_bound(&base()).unwrap().total, 0.0);
    }

    #[test]
    fn linear_in_characteristic() {
        let a = lemma_a_bound(&LemmaAInputs { t_lambda: 3.0, ..base() }).unwrap();
        let b = lemma_a_bound(&LemmaAInputs { t_lambda: 6.0, ..base() }).unwrap();
        assert_eq!(b.characteristic_term, 2.0 * a.characteristic_term);
    }

    #[test]
    fn domain_violation() {
        let e = lemma_a_bound(&LemmaAInputs { lambda: 2.0, ..base() }).unwrap_err();
        assert!(matches!(e, Error::Domain(_)));
    }

    #[test]
    fn shifted_linear_function() {
        // r = 1 would put the zero z = 2 on the circle |qz| = 2
        let f = FunctionModel::polynomial(&[-2.0, 1.0]);
        let c = lemma_a_check(&f, 1.1, 10.0, Complex64::new(2.0, 0.0), 0.5, &QuadOptions::default()).unwrap();
        assert_eq!(c.inputs.n_1f, 1.0);
        assert!((c.inputs.log_f0 - 2f64.ln()).abs() < 1e-15);
        assert!(c.margin > 0.0, "{c:?}");
    }
}
