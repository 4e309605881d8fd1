//! Linear q-difference equations `Σ_{j=0}^n a_j(z) f(q^j z) = a_{n+1}(z)`.

use num_complex::Complex64;
use rug::Complex;

use crate::error::{Error, Result};
use crate::models::{FunctionModel, Poly, PowerSeries, Rational};

/// Modulus distance from 1 below which `q` is treated as unimodular.
const UNIT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct QDifferenceEquation {
    q: Complex64,
    coeffs: Vec<FunctionModel>,
    rhs: FunctionModel,
}

fn model_is_zero(m: &FunctionModel) -> bool {
    match m {
        FunctionModel::Rational(r) => r.is_zero(),
        FunctionModel::PowerSeries(s) => s.coeffs().iter().all(|c| c.real().is_zero() && c.imag().is_zero()),
        _ => false,
    }
}

fn check_variant(m: &FunctionModel, what: &str) -> Result<()> {
    match m {
        FunctionModel::Rational(_) | FunctionModel::PowerSeries(_) => Ok(()),
        other => Err(Error::UnsupportedVariant(format!("{what} is a {} model; equations take rational or series coefficients", other.variant_name()))),
    }
}

impl QDifferenceEquation {
    /// `coeffs` holds `a_0..a_n`; `rhs` is `a_{n+1}`.
    pub fn new(q: Complex64, coeffs: Vec<FunctionModel>, rhs: FunctionModel) -> Result<Self> {
        if !(q.norm() > 0.0) || !q.is_finite() {
            return Err(Error::InvalidParameter(format!("q = {q} must be finite and nonzero")));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("at least one coefficient is needed".into()));
        }
        for (j, a) in coeffs.iter().enumerate() {
            check_variant(a, &format!("a_{j}"))?;
        }
        check_variant(&rhs, "the right-hand side")?;
        if model_is_zero(&coeffs[0]) || model_is_zero(coeffs.last().unwrap()) {
            return Err(Error::InvalidInput("a_0 and a_n must not vanish identically".into()));
        }
        Ok(Self { q, coeffs, rhs })
    }

    /// `f(z) = rhs(z)`.
    pub fn rhs_only(rhs: FunctionModel) -> Result<Self> {
        Self::new(Complex64::new(1.0, 0.0), vec![FunctionModel::polynomial(&[1.0])], rhs)
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    /// `n`, the largest shift.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FunctionModel] {
        &self.coeffs
    }

    pub fn rhs(&self) -> &FunctionModel {
        &self.rhs
    }

    /// `a_0, …, a_{n+1}`.
    pub fn all_models(&self) -> impl Iterator<Item = &FunctionModel> {
        self.coeffs.iter().chain(std::iter::once(&self.rhs))
    }

    pub fn is_homogeneous(&self) -> bool {
        model_is_zero(&self.rhs)
    }

    /// `|q| = 1` within rounding; the upper growth bound does not apply.
    pub fn is_unimodular(&self) -> bool {
        (self.q.norm() - 1.0).abs() <= UNIT_TOL
    }

    pub fn has_rational_coefficients(&self) -> bool {
        self.all_models().any(|m| matches!(m, FunctionModel::Rational(r) if !r.is_polynomial()))
    }

    pub fn is_polynomial(&self) -> bool {
        self.all_models().all(|m| matches!(m, FunctionModel::Rational(r) if r.is_polynomial()))
    }

    /// Every `a_0..a_{n+1}` is a constant.
    pub fn all_constant(&self) -> bool {
        self.all_models().all(|m| match m {
            FunctionModel::Rational(r) => r.is_polynomial() && r.numer().degree().unwrap_or(0) == 0,
            FunctionModel::PowerSeries(s) => s.coeffs().iter().skip(1).all(|c| c.real().is_zero() && c.imag().is_zero()),
            _ => false,
        })
    }

    /// The equivalent equation with `|q| < 1`: with `s = 1/q` and `w = q^n z`,
    /// `Σ_i a_{n−i}(s^n w) f(s^i w) = a_{n+1}(s^n w)`. The solution `f` is unchanged.
    pub fn inverted(&self) -> Result<Self> {
        let s = Complex64::new(1.0, 0.0) / self.q;
        let sn = s.powi(self.order() as i32);
        let coeffs = self.coeffs.iter().rev().map(|a| compose_scale(a, sn)).collect::<Result<Vec<_>>>()?;
        Self::new(s, coeffs, compose_scale(&self.rhs, sn)?)
    }

    /// `self` when `|q| ≤ 1`, otherwise [`Self::inverted`].
    pub fn with_small_q(&self) -> Result<Self> {
        if self.q.norm() > 1.0 + UNIT_TOL { self.inverted() } else { Ok(self.clone()) }
    }
}

/// `a(c·z)` for a rational or series model.
pub fn compose_scale(a: &FunctionModel, c: Complex64) -> Result<FunctionModel> {
    match a {
        FunctionModel::Rational(r) => {
            Ok(FunctionModel::Rational(Rational::new(r.numer().compose_scale(c), r.denom().compose_scale(c))?))
        }
        FunctionModel::PowerSeries(p) => {
            let prec = p.precision();
            let cc = Complex::with_val(prec, (c.re, c.im));
            let mut pow = Complex::with_val(prec, 1);
            let mut coeffs = Vec::with_capacity(p.coeffs().len());
            let mut errs = Vec::with_capacity(p.coeffs().len());
            let lc = c.norm().ln();
            for (k, (a, e)) in p.coeffs().iter().zip(p.log_errors()).enumerate() {
                coeffs.push(Complex::with_val(prec, a * &pow));
                errs.push(e + k as f64 * lc);
                pow *= &cc;
            }
            Ok(FunctionModel::PowerSeries(PowerSeries::new(coeffs, errs, p.is_exact())?))
        }
        other => Err(Error::UnsupportedVariant(format!("cannot rescale a {} model", other.variant_name()))),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClearedEquation {
    pub equation: QDifferenceEquation,
    /// The common multiplier (least common multiple of the denominators).
    pub multiplier: Poly,
    pub max_degree: usize,
}

/// Multiplies the equation by the least common multiple of the coefficient denominators,
/// giving polynomial coefficients.
pub fn clear_denominators(eq: &QDifferenceEquation) -> Result<ClearedEquation> {
    let mut rats = Vec::new();
    for (j, m) in eq.all_models().enumerate() {
        match m {
            FunctionModel::Rational(r) => rats.push(r),
            other => {
                return Err(Error::UnsupportedVariant(format!(
                    "a_{j} is a {} model; only rational coefficients can be cleared",
                    other.variant_name()
                )))
            }
        }
    }
    let mut lcm = Poly::from_real(&[1.0]);
    for r in &rats {
        if r.is_polynomial() {
            continue;
        }
        // lcm(L, d) = L · d / gcd(L, d), and d / gcd is the reduced denominator of L / d
        let reduced = Rational::new(lcm.clone(), r.denom().clone())?;
        if reduced.denom().degree().unwrap_or(0) > 0 {
            lcm = lcm.mul(reduced.denom());
        }
    }
    let mut out = Vec::with_capacity(rats.len());
    let mut max_degree = 0;
    for (j, r) in rats.iter().enumerate() {
        let b = Rational::new(r.numer().mul(&lcm), r.denom().clone())?;
        if !b.is_polynomial() {
            return Err(Error::UncertifiedRoots(format!("denominator of a_{j} did not cancel against the common multiple")));
        }
        let c = b.denom().coeffs()[0];
        let p = b.numer().scale(Complex64::new(1.0, 0.0) / c);
        max_degree = max_degree.max(p.degree().unwrap_or(0));
        out.push(FunctionModel::Rational(Rational::polynomial(p)));
    }
    let rhs = out.pop().expect("rhs present");
    Ok(ClearedEquation { equation: QDifferenceEquation::new(eq.q, out, rhs)?, multiplier: lcm, max_degree })
}
