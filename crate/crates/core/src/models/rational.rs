//! Rational functions `p/q` with cancelled common roots.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::poly::{Poly, RootCluster};
use super::{LogValue, Zero};

/// Relative distance below which a numerator and a denominator root are treated as equal.
const CANCEL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct Rational {
    numer: Poly,
    denom: Poly,
    /// `None` when root isolation could not certify the clusters.
    zeros: Option<Vec<RootCluster>>,
    poles: Option<Vec<RootCluster>>,
}

impl Rational {
    pub fn new(numer: Poly, denom: Poly) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::InvalidInput("denominator is identically zero".into()));
        }
        let (numer, denom) = cancel(numer, denom);
        let zeros = if numer.is_zero() { Some(Vec::new()) } else { numer.root_clusters().ok() };
        let poles = denom.root_clusters().ok();
        Ok(Self { numer, denom, zeros, poles })
    }

    pub fn polynomial(p: Poly) -> Self {
        Self::new(p, Poly::from_real(&[1.0])).expect("unit denominator")
    }

    pub fn from_real(numer: &[f64], denom: &[f64]) -> Result<Self> {
        Self::new(Poly::from_real(numer), Poly::from_real(denom))
    }

    pub fn numer(&self) -> &Poly {
        &self.numer
    }

    pub fn denom(&self) -> &Poly {
        &self.denom
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.degree() == Some(0)
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.numer.eval(z) / self.denom.eval(z)
    }

    pub fn eval_log(&self, x: f64, theta: f64) -> LogValue {
        let d = self.denom.eval_log(x, theta);
        if d.log_abs == f64::NEG_INFINITY {
            return LogValue::pole();
        }
        self.numer.eval_log(x, theta).div(&d)
    }

    /// `(p′q − pq′)/q²`, normalized.
    pub fn derivative(&self) -> Result<Rational> {
        let num = self.numer.derivative().mul(&self.denom).add(&self.numer.mul(&self.denom.derivative()).scale(Complex64::new(-1.0, 0.0)));
        Rational::new(num, self.denom.mul(&self.denom))
    }

    pub fn zeros_upto(&self, log_r: f64) -> Result<Vec<Zero>> {
        if self.numer.is_zero() {
            return Err(Error::InvalidInput("identically zero function has no isolated zeros".into()));
        }
        clusters_upto(self.zeros.as_deref(), log_r, "numerator")
    }

    pub fn poles_upto(&self, log_r: f64) -> Result<Vec<Zero>> {
        clusters_upto(self.poles.as_deref(), log_r, "denominator")
    }

    pub fn zero_clusters(&self) -> Option<&[RootCluster]> {
        self.zeros.as_deref()
    }

    pub fn pole_clusters(&self) -> Option<&[RootCluster]> {
        self.poles.as_deref()
    }
}

fn clusters_upto(clusters: Option<&[RootCluster]>, log_r: f64, what: &str) -> Result<Vec<Zero>> {
    let clusters = clusters.ok_or_else(|| Error::UncertifiedRoots(format!("{what} roots could not be isolated")))?;
    let r = log_r.exp();
    let mut out = Vec::new();
    for c in clusters {
        let (lo, hi) = c.modulus_range();
        if lo > r {
            continue;
        }
        if hi > r && !(c.radius == 0.0 && c.center.norm() <= r) {
            return Err(Error::UncertifiedRoots(format!(
                "{what} root cluster at |z| ∈ [{lo}, {hi}] straddles the circle r = {r}"
            )));
        }
        let m = c.center.norm();
        out.push(Zero {
            log_modulus: if m == 0.0 { f64::NEG_INFINITY } else { m.ln() },
            arg: c.center.arg(),
            multiplicity: c.multiplicity as u32,
        });
    }
    out.sort_by(|a, b| a.log_modulus.total_cmp(&b.log_modulus));
    Ok(out)
}

/// Removes common roots, including a common power of `z`.
fn cancel(mut n: Poly, mut d: Poly) -> (Poly, Poly) {
    if n.is_zero() {
        return (n, Poly::from_real(&[1.0]));
    }
    let v = n.valuation().min(d.valuation());
    n = n.shift_down(v);
    d = d.shift_down(v);
    let (Ok(nc), Ok(dc)) = (n.root_clusters(), d.root_clusters()) else {
        return (n, d);
    };
    for a in &nc {
        for b in &dc {
            let scale = a.center.norm().max(b.center.norm()).max(1.0);
            if (a.center - b.center).norm() <= CANCEL_TOL * scale {
                let k = a.multiplicity.min(b.multiplicity);
                let root = 0.5 * (a.center + b.center);
                for _ in 0..k {
                    n = n.deflate(root);
                    d = d.deflate(root);
                }
            }
        }
    }
    // keep the denominator monic-free but with a unit-size leading term
    let lead = d.leading();
    if lead.norm() > 0.0 && (lead.norm() > 1e100 || lead.norm() < 1e-100) {
        let s = Complex64::new(1.0, 0.0) / lead;
        n = n.scale(s);
        d = d.scale(s);
    }
    (n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn reciprocal_shift_values() {
        let f = Rational::from_real(&[1.0], &[-1.0, 1.0]).unwrap();
        let v = f.eval_log(1.0, 0.0);
        assert!((v.log_abs + (E - 1.0).ln()).abs() < 1e-14);
        assert!(f.eval_log(0.0, 0.0).pole);
    }

    #[test]
    fn derivative_of_reciprocal_shift() {
        let f = Rational::from_real(&[1.0], &[-1.0, 1.0]).unwrap();
        let d = f.derivative().unwrap();
        let z = Complex64::new(3.0, 0.5);
        let expect = -1.0 / ((z - 1.0) * (z - 1.0));
        assert!((d.eval(z) - expect).norm() < 1e-13);
        let poles = d.poles_upto(2f64.ln()).unwrap();
        assert_eq!(poles.len(), 1);
        assert_eq!(poles[0].multiplicity, 2);
    }

    #[test]
    fn common_roots_cancel() {
        // (z−1)(z−2) / ((z−1) z)
        let n = Poly::from_roots(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]);
        let d = Poly::from_roots(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let f = Rational::new(n, d).unwrap();
        assert_eq!(f.denom().degree(), Some(1));
        assert_eq!(f.numer().degree(), Some(1));
        assert!(f.zeros_upto(0.5).unwrap().is_empty());
        let poles = f.poles_upto(0.0).unwrap();
        assert_eq!(poles.len(), 1);
        assert_eq!(poles[0].log_modulus, f64::NEG_INFINITY);
    }

    #[test]
    fn counting_lists() {
        let f = Rational::from_real(&[1.0], &[-1.0, 1.0]).unwrap();
        assert!(f.zeros_upto(2f64.ln()).unwrap().is_empty());
        let p = f.poles_upto(2f64.ln()).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[0].log_modulus.abs() < 1e-15);
    }
}
