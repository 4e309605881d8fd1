//! Evaluable meromorphic functions: rational functions, truncated power series,
//! canonical products and their quotients.

mod poly;
mod product;
mod rational;
mod series;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scales::PhiScale;

pub use poly::{Poly, RootCluster};
pub use product::{
    CanonicalProduct, PreparedProduct, Quotient, ZeroGenerator, ZeroRow, ZeroSequence, DEFAULT_TAIL_TOL, MAX_TERMS,
};
pub use rational::Rational;
pub use series::{DecimalCoeff, PowerSeries};

/// `log f(z)` as magnitude and phase with a bound on the error of `log_abs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    pub log_abs: f64,
    pub arg: f64,
    pub error_bound: f64,
    /// Set when `z` is a pole; `log_abs` is then `+∞`.
    pub pole: bool,
}

impl LogValue {
    pub fn zero() -> Self {
        Self { log_abs: f64::NEG_INFINITY, arg: 0.0, error_bound: 0.0, pole: false }
    }

    pub fn pole() -> Self {
        Self { log_abs: f64::INFINITY, arg: 0.0, error_bound: 0.0, pole: true }
    }

    pub fn mul(&self, o: &LogValue) -> LogValue {
        LogValue {
            log_abs: self.log_abs + o.log_abs,
            arg: crate::logspace::wrap_angle(self.arg + o.arg),
            error_bound: self.error_bound + o.error_bound,
            pole: self.pole || o.pole,
        }
    }

    pub fn div(&self, o: &LogValue) -> LogValue {
        LogValue {
            log_abs: self.log_abs - o.log_abs,
            arg: crate::logspace::wrap_angle(self.arg - o.arg),
            error_bound: self.error_bound + o.error_bound,
            pole: self.pole || o.log_abs == f64::NEG_INFINITY,
        }
    }

    /// `log⁺|f|`.
    pub fn log_plus(&self) -> f64 {
        self.log_abs.max(0.0)
    }
}

/// A zero or pole given by `log |z|` (`−∞` at the origin), argument and multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub log_modulus: f64,
    pub arg: f64,
    pub multiplicity: u32,
}

/// Zeros or poles in a closed disc; `complete` is `false` when only part of them could be certified.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroList {
    pub points: Vec<Zero>,
    pub complete: bool,
}

impl ZeroList {
    fn exact(points: Vec<Zero>) -> Self {
        Self { points, complete: true }
    }

    pub fn count(&self) -> u64 {
        self.points.iter().map(|z| z.multiplicity as u64).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Zeros,
    Poles,
}

/// Leading behaviour `f(z) ~ a z^order` at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OriginTerm {
    pub order: i64,
    pub log_abs_coeff: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionModel {
    Rational(Rational),
    PowerSeries(PowerSeries),
    CanonicalProduct(CanonicalProduct),
    Quotient(Quotient),
}

impl FunctionModel {
    /// `f(z) = z`.
    pub fn identity() -> Self {
        Self::Rational(Rational::polynomial(Poly::from_real(&[0.0, 1.0])))
    }

    pub fn polynomial(coeffs: &[f64]) -> Self {
        Self::Rational(Rational::polynomial(Poly::from_real(coeffs)))
    }

    pub fn rational(numer: &[f64], denom: &[f64]) -> Result<Self> {
        Ok(Self::Rational(Rational::from_real(numer, denom)?))
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Self::Rational(_) => "rational",
            Self::PowerSeries(_) => "series",
            Self::CanonicalProduct(_) => "product",
            Self::Quotient(_) => "quotient",
        }
    }

    pub fn is_entire(&self) -> bool {
        match self {
            Self::Rational(r) => r.is_polynomial(),
            Self::PowerSeries(_) | Self::CanonicalProduct(_) => true,
            Self::Quotient(q) => q.power >= 0 && q.denom.zeros().is_empty(),
        }
    }

    /// Largest `log r` at which the model is a faithful representation.
    pub fn max_log_r(&self) -> f64 {
        match self {
            Self::PowerSeries(s) => s.max_usable_log_r(0.8),
            _ => f64::INFINITY,
        }
    }

    pub fn evaluate(&self, log_r: f64, theta: f64) -> Result<LogValue> {
        match self {
            Self::Rational(r) => Ok(r.eval_log(log_r, theta)),
            Self::PowerSeries(s) => Ok(s.eval_log(log_r, theta)),
            Self::CanonicalProduct(p) => p.eval_log(log_r, theta),
            Self::Quotient(q) => q.eval_log(log_r, theta),
        }
    }

    /// Evaluator for many angles on one circle; products materialize their zeros once.
    pub fn circle(&self, log_r: f64) -> Result<CircleEvaluator<'_>> {
        let prep = match self {
            Self::CanonicalProduct(p) => Prep::Product(p.prepare(log_r)?),
            Self::Quotient(q) => Prep::Quotient(q, Box::new(q.prepare(log_r)?)),
            other => Prep::Direct(other),
        };
        Ok(CircleEvaluator { log_r, prep })
    }

    pub fn points_upto(&self, kind: PointKind, log_r: f64) -> Result<ZeroList> {
        match kind {
            PointKind::Zeros => self.zeros_upto(log_r),
            PointKind::Poles => self.poles_upto(log_r),
        }
    }

    pub fn zeros_upto(&self, log_r: f64) -> Result<ZeroList> {
        match self {
            Self::Rational(r) => r.zeros_upto(log_r).map(ZeroList::exact),
            Self::PowerSeries(s) => s.zeros_upto(log_r).map(|(points, complete)| ZeroList { points, complete }),
            Self::CanonicalProduct(p) => p.zeros_upto(log_r).map(ZeroList::exact),
            Self::Quotient(q) => q.zeros_upto(log_r).map(ZeroList::exact),
        }
    }

    pub fn poles_upto(&self, log_r: f64) -> Result<ZeroList> {
        match self {
            Self::Rational(r) => r.poles_upto(log_r).map(ZeroList::exact),
            Self::PowerSeries(_) | Self::CanonicalProduct(_) => Ok(ZeroList::exact(Vec::new())),
            Self::Quotient(q) => q.poles_upto(log_r).map(ZeroList::exact),
        }
    }

    pub fn differentiate(&self) -> Result<FunctionModel> {
        match self {
            Self::Rational(r) => Ok(Self::Rational(r.derivative()?)),
            Self::PowerSeries(s) => Ok(Self::PowerSeries(s.derivative())),
            Self::CanonicalProduct(_) | Self::Quotient(_) => {
                Err(Error::UnsupportedVariant(format!("derivative of a {} model", self.variant_name())))
            }
        }
    }

    /// Order and leading coefficient at the origin, `None` for the zero function.
    pub fn origin_term(&self) -> Option<OriginTerm> {
        match self {
            Self::Rational(r) => {
                if r.is_zero() {
                    return None;
                }
                let (vn, vd) = (r.numer().valuation(), r.denom().valuation());
                let a = r.numer().coeffs()[vn] / r.denom().coeffs()[vd];
                Some(OriginTerm { order: vn as i64 - vd as i64, log_abs_coeff: a.norm().ln() })
            }
            Self::PowerSeries(s) => {
                let v = s.valuation();
                (v < s.coeffs().len()).then(|| OriginTerm { order: v as i64, log_abs_coeff: s.log_abs_coeff(v) })
            }
            Self::CanonicalProduct(_) => Some(OriginTerm { order: 0, log_abs_coeff: 0.0 }),
            Self::Quotient(q) => Some(OriginTerm { order: q.power, log_abs_coeff: q.constant.norm().ln() }),
        }
    }
}

enum Prep<'a> {
    Direct(&'a FunctionModel),
    Product(PreparedProduct),
    Quotient(&'a Quotient, Box<(PreparedProduct, PreparedProduct)>),
}

pub struct CircleEvaluator<'a> {
    log_r: f64,
    prep: Prep<'a>,
}

impl CircleEvaluator<'_> {
    pub fn log_r(&self) -> f64 {
        self.log_r
    }

    pub fn eval(&self, theta: f64) -> LogValue {
        match &self.prep {
            Prep::Direct(m) => m.evaluate(self.log_r, theta).expect("direct variants evaluate infallibly"),
            Prep::Product(p) => p.eval(self.log_r, theta),
            Prep::Quotient(q, parts) => q.eval_prepared(parts, self.log_r, theta),
        }
    }
}

/// Product with zeros at `φ⁻¹(n^{1/κ})`.
pub fn make_example_f(phi: PhiScale, kappa: f64) -> Result<FunctionModel> {
    Ok(FunctionModel::CanonicalProduct(CanonicalProduct::new(ZeroSequence::example_f(phi, kappa)?)))
}

/// Product with zeros at `φ⁻¹(cⁿ)`.
pub fn make_example_g(phi: PhiScale, c: f64) -> Result<FunctionModel> {
    Ok(FunctionModel::CanonicalProduct(CanonicalProduct::new(ZeroSequence::example_g(phi, c)?)))
}

/// `C z^m P₁/P₂` from two zero sequences.
pub fn make_quotient(constant: Complex64, power: i64, numer: ZeroSequence, denom: ZeroSequence) -> Result<FunctionModel> {
    Ok(FunctionModel::Quotient(Quotient::new(constant, power, CanonicalProduct::new(numer), CanonicalProduct::new(denom))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn identity_at_e() {
        let v = FunctionModel::identity().evaluate(1.0, 0.0).unwrap();
        assert_eq!(v.log_abs, 1.0);
    }

    #[test]
    fn example_f_zero_list() {
        let f = make_example_f(PhiScale::log(), 0.5).unwrap();
        let z = f.zeros_upto(5.0).unwrap();
        assert!(z.complete);
        assert_eq!(z.points.iter().map(|z| (z.log_modulus, z.multiplicity)).collect::<Vec<_>>(), vec![(1.0, 1), (4.0, 1)]);
        assert!(matches!(f.differentiate(), Err(Error::UnsupportedVariant(_))));
    }

    #[test]
    fn origin_terms() {
        let f = FunctionModel::rational(&[0.0, 0.0, 3.0], &[-1.0, 1.0]).unwrap();
        let o = f.origin_term().unwrap();
        assert_eq!(o.order, 2);
        assert!((o.log_abs_coeff - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn circle_evaluator_matches_direct() {
        let f = make_example_g(PhiScale::log(), 2.0).unwrap();
        let c = f.circle(7.0).unwrap();
        for k in 0..16 {
            let t = -PI + k as f64 * 0.4;
            let a = c.eval(t);
            let b = f.evaluate(7.0, t).unwrap();
            assert!((a.log_abs - b.log_abs).abs() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(x in -2.0f64..30.0, t in 0.01f64..3.1, kappa in 0.2f64..0.9) {
            let f = make_example_f(PhiScale::log(), kappa).unwrap();
            let a = f.evaluate(x, t).unwrap();
            let b = f.evaluate(x, -t).unwrap();
            prop_assert!((a.log_abs - b.log_abs).abs() <= 1e-12 * (1.0 + a.log_abs.abs()));
            prop_assert!((crate::logspace::wrap_angle(a.arg + b.arg)).abs() < 1e-9);
        }

        #[test]
        fn tighter_tail_stays_within_bound(x in 0.0f64..12.0, t in 0.0f64..6.28, c in 1.5f64..4.0) {
            let seq = ZeroSequence::example_g(PhiScale::log(), c).unwrap();
            let coarse = CanonicalProduct::new(seq.clone()).with_tail_tolerance(1e-4);
            let fine = CanonicalProduct::new(seq).with_tail_tolerance(1e-14);
            let a = coarse.eval_log(x, t).unwrap();
            let b = fine.eval_log(x, t).unwrap();
            prop_assert!((a.log_abs - b.log_abs).abs() <= a.error_bound + b.error_bound);
        }

        #[test]
        fn closed_form_counts(x in 0.5f64..3000.0, kappa in 0.2f64..0.95, c in 1.2f64..5.0) {
            let f = ZeroSequence::example_f(PhiScale::log(), kappa).unwrap();
            let brute = (1..).take_while(|&n| (n as f64).powf(1.0 / kappa) <= x).count() as u64;
            let got = f.count_upto(x);
            // ties at the boundary may round either way
            prop_assert!(got.abs_diff(brute) <= 1);
            let g = ZeroSequence::example_g(PhiScale::log(), c).unwrap();
            let brute = (1..).take_while(|&n| c.powi(n) <= x).count() as u64;
            prop_assert!(g.count_upto(x).abs_diff(brute) <= 1);
        }

        #[test]
        fn reciprocal_sums_converge(kappa in 0.2f64..0.95, c in 1.2f64..5.0) {
            for s in [ZeroSequence::example_f(PhiScale::log(), kappa).unwrap(), ZeroSequence::example_g(PhiScale::log(), c).unwrap()] {
                let p = CanonicalProduct::new(s);
                prop_assert!(p.log_reciprocal_sum().is_finite());
            }
        }
    }
}
