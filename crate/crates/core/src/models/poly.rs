//! Dense complex polynomials with log-space evaluation and certified root clusters.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::logspace::unit_roundoff;

use super::LogValue;

/// Coefficients from low to high degree; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

/// A connected component of inclusion discs holding exactly `multiplicity` roots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootCluster {
    pub center: Complex64,
    /// Every root of the cluster lies within this distance of `center`.
    pub radius: f64,
    pub multiplicity: usize,
}

impl RootCluster {
    pub fn modulus_range(&self) -> (f64, f64) {
        let c = self.center.norm();
        ((c - self.radius).max(0.0), c + self.radius)
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `∏ (z − root)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Self::constant(Complex64::new(1.0, 0.0));
        for &r in roots {
            p = p.mul(&Self::new(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    /// Multiplicity of the root at the origin.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == Complex64::new(0.0, 0.0)).count()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Horner value with the standard running error bound `|p̂ − p|`.
    pub fn eval_with_bound(&self, z: Complex64) -> (Complex64, f64) {
        let az = z.norm();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
            mag = mag * az + acc.norm();
        }
        let n = self.coeffs.len() as f64;
        (acc, (4.0 * n + 4.0) * unit_roundoff() * mag.max(acc.norm()))
    }

    /// `p(e^{x + iθ})` in log-space. Large radii are handled through the reversed polynomial.
    pub fn eval_log(&self, x: f64, theta: f64) -> LogValue {
        let Some(d) = self.degree() else {
            return LogValue::zero();
        };
        let v = self.valuation();
        let inner = &self.coeffs[v..];
        let dd = d - v;
        let (val, bound, shift) = if x <= 0.0 {
            let z = Complex64::from_polar(x.exp(), theta);
            let p = Poly { coeffs: inner.to_vec() };
            let (val, b) = p.eval_with_bound(z);
            (val, b, 0.0)
        } else {
            let w = Complex64::from_polar((-x).exp(), -theta);
            let rev = Poly { coeffs: inner.iter().rev().copied().collect() };
            let (val, b) = rev.eval_with_bound(w);
            (val, b, dd as f64)
        };
        let k = (v as f64) + shift;
        let u = unit_roundoff();
        // rounding of z and its powers
        let z_err = 4.0 * (dd as f64 + 1.0) * u + k * x.abs() * u;
        let abs = val.norm();
        let log_abs = k * x + abs.ln();
        let arg = crate::logspace::wrap_angle(k * theta + val.arg());
        let rel = if abs > 0.0 { bound / abs } else { f64::INFINITY };
        let error_bound = if rel < 1.0 { -(1.0 - rel).ln() + z_err } else { f64::INFINITY };
        LogValue { log_abs, arg, error_bound, pole: false }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, k: usize| p.coeffs.get(k).copied().unwrap_or_default();
        Poly::new((0..n).map(|k| get(self, k) + get(other, k)).collect())
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(c·z)`.
    pub fn compose_scale(&self, c: Complex64) -> Poly {
        let mut pow = Complex64::new(1.0, 0.0);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * pow);
            pow *= c;
        }
        Poly::new(out)
    }

    /// Divides by `(z − root)` by synthetic division, dropping the remainder.
    pub fn deflate(&self, root: Complex64) -> Poly {
        let n = self.coeffs.len();
        if n < 2 {
            return self.clone();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (1..n).rev() {
            acc = acc * root + self.coeffs[k];
            out[k - 1] = acc;
        }
        Poly::new(out)
    }

    /// Removes the factor `z^k`.
    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    /// Root clusters of the polynomial, including the origin with its exact multiplicity.
    ///
    /// Approximations come from Aberth iteration. Inclusion discs use the bound
    /// `|z − ζ| ≤ n |p(z_i)| / |a_n ∏_{j≠i} (z_i − z_j)|`; a connected union of `k` discs
    /// holds exactly `k` roots.
    pub fn root_clusters(&self) -> Result<Vec<RootCluster>> {
        let Some(_) = self.degree() else {
            return Err(Error::InvalidInput("zero polynomial has no isolated roots".into()));
        };
        let v = self.valuation();
        let mut out = Vec::new();
        if v > 0 {
            out.push(RootCluster { center: Complex64::new(0.0, 0.0), radius: 0.0, multiplicity: v });
        }
        let p = self.shift_down(v);
        let n = p.degree().unwrap();
        if n == 0 {
            return Ok(out);
        }
        if n == 1 {
            let root = -p.coeffs[0] / p.coeffs[1];
            let (_, b) = p.eval_with_bound(root);
            let radius = (p.eval(root).norm() + b) / p.coeffs[1].norm() * (1.0 + 8.0 * unit_roundoff());
            out.push(RootCluster { center: root, radius, multiplicity: 1 });
            return Ok(out);
        }
        let z = aberth(&p)?;
        let lead = p.leading().norm();
        let nf = n as f64;
        let mut radii = Vec::with_capacity(n);
        for i in 0..n {
            let (val, b) = p.eval_with_bound(z[i]);
            let mut prod = 1.0;
            for j in 0..n {
                if j != i {
                    prod *= (z[i] - z[j]).norm();
                }
            }
            if prod == 0.0 || !prod.is_finite() {
                return Err(Error::UncertifiedRoots("coincident root approximations".into()));
            }
            radii.push(nf * (val.norm() + b) / (lead * prod) * (1.0 + 4.0 * nf * unit_roundoff()));
        }
        // union-find over overlapping discs
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], i: usize) -> usize {
            let mut i = i;
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                if (z[i] - z[j]).norm() <= radii[i] + radii[j] {
                    let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = root(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        for members in groups.values() {
            let k = members.len();
            let center = members.iter().map(|&i| z[i]).sum::<Complex64>() / k as f64;
            let radius = members.iter().map(|&i| (z[i] - center).norm() + radii[i]).fold(0.0, f64::max);
            if !radius.is_finite() {
                return Err(Error::UncertifiedRoots("non-finite inclusion radius".into()));
            }
            out.push(RootCluster { center, radius, multiplicity: k });
        }
        out.sort_by(|a, b| a.center.norm().total_cmp(&b.center.norm()));
        Ok(out)
    }
}

fn aberth(p: &Poly) -> Result<Vec<Complex64>> {
    let n = p.degree().unwrap();
    let dp = p.derivative();
    let a0 = p.coeffs[0].norm();
    let an = p.leading().norm();
    let rho = (a0 / an).powf(1.0 / n as f64).max(1e-300);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(rho, std::f64::consts::TAU * k as f64 / n as f64 + 0.4)).collect();
    let mut done = vec![false; n];
    for _ in 0..1000 {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let pv = p.eval(z[i]);
            if pv == Complex64::new(0.0, 0.0) {
                done[i] = true;
                continue;
            }
            let ratio = pv / dp.eval(z[i]);
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.re.is_finite() || !w.im.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::UncertifiedRoots("root iteration diverged".into()));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn simple_roots_certified() {
        let p = Poly::from_roots(&[c(2.0, 0.0), c(-3.0, 0.5), c(0.0, 1.0)]);
        let cl = p.root_clusters().unwrap();
        assert_eq!(cl.len(), 3);
        assert!(cl.iter().all(|k| k.multiplicity == 1 && k.radius < 1e-10));
        assert!((cl[0].center - c(0.0, 1.0)).norm() < 1e-12);
        assert!((cl[2].center - c(-3.0, 0.5)).norm() < 1e-12);
    }

    #[test]
    fn double_root_clusters() {
        let p = Poly::from_roots(&[c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)]);
        let cl = p.root_clusters().unwrap();
        let near_one: Vec<_> = cl.iter().filter(|k| (k.center - c(1.0, 0.0)).norm() < 1e-5).collect();
        assert_eq!(near_one.len(), 1);
        assert_eq!(near_one[0].multiplicity, 2);
    }

    #[test]
    fn origin_multiplicity_exact() {
        let p = Poly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]);
        let cl = p.root_clusters().unwrap();
        assert_eq!(cl[0].multiplicity, 2);
        assert_eq!(cl[0].radius, 0.0);
        assert!((cl[1].center - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn log_eval_large_radius() {
        let p = Poly::from_real(&[-2.0, 0.0, 1.0]);
        let v = p.eval_log(1000.0, 0.3);
        assert!((v.log_abs - 2000.0).abs() < 1e-9);
        assert!(v.error_bound < 1e-9);
        let v = p.eval_log(0.0, 0.0);
        assert!((v.log_abs - 0.0).abs() < 1e-15);
    }

    #[test]
    fn deflation_and_scaling() {
        let p = Poly::from_roots(&[c(2.0, 0.0), c(5.0, 0.0)]);
        let q = p.deflate(c(2.0, 0.0));
        assert!((q.eval(c(5.0, 0.0))).norm() < 1e-12);
        assert_eq!(q.degree(), Some(1));
        let s = p.compose_scale(c(2.0, 0.0));
        assert!(s.eval(c(1.0, 0.0)).norm() < 1e-12);
    }
}
