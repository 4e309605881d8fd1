//! The comparison scale φ(r), carried in log-space.
//!
//! Every method takes `x = log r` and works with `log φ`, so that radii like
//! `e^{e^{700}}` stay representable.

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::{log_add_exp, log_sub_exp};

use super::s::SScale;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinPhi {
    /// `φ(r) = (log r)^α`
    LogPower,
    /// `φ(r) = exp((log r)^β)`
    ExpLogPower,
    /// `φ(r) = r^β`
    Power,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiFlags {
    pub claims_subadditive: bool,
    pub claims_concave: bool,
    pub claims_differentiable: bool,
}

/// Breakpoints `(log x_i, log y_i)` of a piecewise-linear function of `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    pub log_x: Vec<f64>,
    pub log_y: Vec<f64>,
}

/// One row of a user-supplied scale table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub r: f64,
    pub phi_r: f64,
    #[serde(default)]
    pub dphi: Option<f64>,
    #[serde(default)]
    pub d2phi: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiTable {
    log_r: Vec<f64>,
    log_phi: Vec<f64>,
    e1: Option<Vec<f64>>,
    e2: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhiKind {
    LogPower { alpha: f64 },
    ExpLogPower { beta: f64 },
    Power { beta: f64 },
    Polygonal(Polyline),
    Table(PhiTable),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiScale {
    kind: PhiKind,
    log_r0: f64,
    flags: PhiFlags,
    warning: Option<String>,
    valid_log_r_max: f64,
}

impl PhiScale {
    /// Closed-form scale with exact derivatives and inverse. The domain starts at `r = e²`.
    pub fn builtin(kind: BuiltinPhi, param: f64) -> Result<Self> {
        if !(param > 0.0) || !param.is_finite() {
            return Err(Error::InvalidParameter(format!("scale parameter must be positive, got {param}")));
        }
        let (kind, in_range) = match kind {
            BuiltinPhi::LogPower => (PhiKind::LogPower { alpha: param }, param > 1.0 && param <= 2.0),
            BuiltinPhi::ExpLogPower => (PhiKind::ExpLogPower { beta: param }, param <= 1.0),
            BuiltinPhi::Power => (PhiKind::Power { beta: param }, param <= 1.0),
        };
        let warning = (!in_range).then(|| format!("parameter {param} outside the usual range for {kind:?}"));
        let restricted = match &kind {
            PhiKind::Power { beta } | PhiKind::ExpLogPower { beta } => *beta <= 1.0,
            PhiKind::LogPower { alpha } => *alpha >= 1.0,
            _ => unreachable!(),
        };
        Ok(Self {
            kind,
            log_r0: 2.0,
            flags: PhiFlags { claims_subadditive: true, claims_concave: restricted, claims_differentiable: true },
            warning,
            valid_log_r_max: f64::INFINITY,
        })
    }

    pub fn log() -> Self {
        Self::builtin(BuiltinPhi::LogPower, 1.0).expect("valid parameter")
    }

    pub fn identity() -> Self {
        Self::builtin(BuiltinPhi::Power, 1.0).expect("valid parameter")
    }

    /// The piecewise-linear adversary through `(r_n, log r_n)` and `(s(r_n), s(r_n))` with
    /// `log r_{n+1} = s(r_n) + 1/2`. Breakpoints stop once `s(r_n)` would exceed `e^{cap_log_r}`
    /// or `f64` can no longer hold `s(r_n)` itself; the validity range records where.
    pub fn polygonal_adversary(s: &SScale, log_r1: f64, cap_log_r: f64) -> Result<Self> {
        if !(log_r1 > s.log_r0()) {
            return Err(Error::InvalidParameter(format!("r1 must exceed R0 of s (log r1 = {log_r1})")));
        }
        if !(log_r1 > 0.0) {
            return Err(Error::InvalidParameter("r1 must exceed 1".into()));
        }
        let mut log_x = vec![log_r1];
        let mut log_y = vec![log_r1.ln()];
        let mut lr = log_r1;
        loop {
            let ls = s.log_s(lr);
            if !(ls.is_finite()) || ls > cap_log_r {
                break;
            }
            // (s_n, s_n)
            log_x.push(ls);
            log_y.push(ls);
            let s_n = ls.exp();
            if !s_n.is_finite() {
                break;
            }
            let next = s_n + 0.5;
            if next > cap_log_r {
                break;
            }
            log_x.push(next);
            log_y.push(next.ln());
            lr = next;
        }
        if log_x.len() < 2 {
            return Err(Error::InvalidParameter("radius cap leaves no polygon segment".into()));
        }
        let valid = *log_x.last().unwrap();
        Ok(Self {
            kind: PhiKind::Polygonal(Polyline { log_x, log_y }),
            log_r0: log_r1,
            flags: PhiFlags { claims_subadditive: false, claims_concave: false, claims_differentiable: false },
            warning: None,
            valid_log_r_max: valid,
        })
    }

    /// Scale from a table, interpolated as a piecewise power law between rows.
    pub fn from_table(rows: &[TableRow]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidInput("scale table needs at least two rows".into()));
        }
        let mut log_r = Vec::with_capacity(rows.len());
        let mut log_phi = Vec::with_capacity(rows.len());
        for row in rows {
            if !(row.r > 0.0 && row.phi_r > 0.0) {
                return Err(Error::InvalidInput(format!("non-positive table entry at r = {}", row.r)));
            }
            log_r.push(row.r.ln());
            log_phi.push(row.phi_r.ln());
        }
        if log_r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("table radii must increase".into()));
        }
        let e1 = rows.iter().map(|r| r.dphi.map(|d| r.r * d / r.phi_r)).collect::<Option<Vec<_>>>();
        let e2 = rows
            .iter()
            .map(|r| match (r.dphi, r.d2phi) {
                (Some(d), Some(d2)) if d != 0.0 => Some(1.0 + r.r * d2 / d),
                _ => None,
            })
            .collect::<Option<Vec<_>>>();
        let differentiable = e1.is_some();
        let lo = log_r[0];
        let hi = *log_r.last().unwrap();
        Ok(Self {
            kind: PhiKind::Table(PhiTable { log_r, log_phi, e1, e2 }),
            log_r0: lo,
            flags: PhiFlags { claims_subadditive: false, claims_concave: false, claims_differentiable: differentiable },
            warning: None,
            valid_log_r_max: hi,
        })
    }

    pub fn with_domain_start(mut self, log_r0: f64) -> Self {
        self.log_r0 = log_r0;
        self
    }

    pub fn kind(&self) -> &PhiKind {
        &self.kind
    }

    pub fn flags(&self) -> PhiFlags {
        self.flags
    }

    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    pub fn log_r0(&self) -> f64 {
        self.log_r0
    }

    /// Largest `log r` at which the scale is defined by data rather than extrapolation.
    pub fn valid_log_r_max(&self) -> f64 {
        self.valid_log_r_max
    }

    pub fn has_derivatives(&self) -> bool {
        match &self.kind {
            PhiKind::Table(t) => t.e1.is_some() && t.e2.is_some(),
            PhiKind::Polygonal(_) => true,
            _ => true,
        }
    }

    pub fn has_inverse(&self) -> bool {
        true
    }

    pub fn is_builtin(&self) -> bool {
        matches!(self.kind, PhiKind::LogPower { .. } | PhiKind::ExpLogPower { .. } | PhiKind::Power { .. })
    }

    /// `log φ(r)` at `x = log r`.
    pub fn log_phi(&self, x: f64) -> f64 {
        match &self.kind {
            PhiKind::LogPower { alpha } => alpha * x.ln(),
            PhiKind::ExpLogPower { beta } => x.powf(*beta),
            PhiKind::Power { beta } => beta * x,
            PhiKind::Polygonal(p) => p.eval(x),
            PhiKind::Table(t) => interp(&t.log_r, &t.log_phi, x),
        }
    }

    /// Elasticity `r φ′(r) / φ(r)`.
    pub fn elasticity(&self, x: f64) -> Option<f64> {
        match &self.kind {
            PhiKind::LogPower { alpha } => Some(alpha / x),
            PhiKind::ExpLogPower { beta } => Some(beta * x.powf(beta - 1.0)),
            PhiKind::Power { beta } => Some(*beta),
            PhiKind::Polygonal(p) => Some(p.elasticity(x)),
            PhiKind::Table(t) => match &t.e1 {
                Some(e1) => Some(interp(&t.log_r, e1, x)),
                None => None,
            },
        }
    }

    /// `1 + r φ″(r) / φ′(r)`, the elasticity of `r φ′(r)`.
    pub fn dlog_r_dphi(&self, x: f64) -> Option<f64> {
        match &self.kind {
            PhiKind::LogPower { alpha } => Some((alpha - 1.0) / x),
            PhiKind::ExpLogPower { beta } => Some((beta - 1.0) / x + beta * x.powf(beta - 1.0)),
            PhiKind::Power { beta } => Some(*beta),
            PhiKind::Polygonal(_) => Some(1.0),
            PhiKind::Table(t) => t.e2.as_ref().map(|e2| interp(&t.log_r, e2, x)),
        }
    }

    /// `r φ″(r) / φ′(r)`.
    pub fn curvature(&self, x: f64) -> Option<f64> {
        self.dlog_r_dphi(x).map(|v| v - 1.0)
    }

    /// `log r` with `log φ(r) = ell`.
    pub fn inverse_log(&self, ell: f64) -> Option<f64> {
        match &self.kind {
            PhiKind::LogPower { alpha } => Some((ell / alpha).exp()),
            PhiKind::ExpLogPower { beta } => (ell >= 0.0).then(|| ell.powf(1.0 / beta)),
            PhiKind::Power { beta } => Some(ell / beta),
            PhiKind::Polygonal(p) => p.inverse(ell),
            PhiKind::Table(t) => Some(interp(&t.log_phi, &t.log_r, ell)),
        }
    }

    /// `log φ` at a high-precision `log r`; builtins only.
    pub fn log_phi_hp(&self, x: &Float) -> Option<Float> {
        let prec = x.prec();
        match &self.kind {
            PhiKind::LogPower { alpha } => Some(Float::with_val(prec, x.ln_ref()) * *alpha),
            PhiKind::ExpLogPower { beta } => Some(Float::with_val(prec, x.pow(*beta))),
            PhiKind::Power { beta } => Some(Float::with_val(prec, x * *beta)),
            _ => None,
        }
    }

    /// Inverse of [`Self::log_phi_hp`].
    pub fn inverse_log_hp(&self, ell: &Float) -> Option<Float> {
        let prec = ell.prec();
        match &self.kind {
            PhiKind::LogPower { alpha } => Some(Float::with_val(prec, ell / *alpha).exp()),
            PhiKind::ExpLogPower { beta } => {
                let inv = Float::with_val(prec, 1) / *beta;
                Some(Float::with_val(prec, ell.pow(&inv)))
            }
            PhiKind::Power { beta } => Some(Float::with_val(prec, ell / *beta)),
            _ => None,
        }
    }

    /// `φ(r)` for moderate `r`.
    pub fn eval(&self, r: f64) -> f64 {
        self.log_phi(r.ln()).exp()
    }

    /// `φ′(r)` for moderate `r`.
    pub fn deriv(&self, r: f64) -> Option<f64> {
        self.elasticity(r.ln()).map(|e| e * self.eval(r) / r)
    }

    /// `φ″(r)` for moderate `r`.
    pub fn deriv2(&self, r: f64) -> Option<f64> {
        let d = self.deriv(r)?;
        self.curvature(r.ln()).map(|c| c * d / r)
    }

    /// `φ⁻¹(y)` for moderate `y`.
    pub fn inverse(&self, y: f64) -> Option<f64> {
        self.inverse_log(y.ln()).map(f64::exp)
    }

    /// Largest `|log φ(φ⁻¹(y)) − log y|` over the sampled `log y`, at `prec` bits.
    pub fn inverse_roundtrip_error(&self, log_ys: &[f64], prec: u32) -> Option<f64> {
        let mut worst = 0.0f64;
        for &ell in log_ys {
            let e = Float::with_val(prec, ell);
            let x = self.inverse_log_hp(&e)?;
            let back = self.log_phi_hp(&x)?;
            let diff = Float::with_val(prec, &back - &e).abs();
            worst = worst.max(diff.to_f64());
        }
        Some(worst)
    }
}

impl Polyline {
    fn segment(&self, x: f64) -> usize {
        let n = self.log_x.len();
        match self.log_x.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        lerp_log(self.log_x[i], self.log_x[i + 1], self.log_y[i], self.log_y[i + 1], x)
    }

    fn inverse(&self, ell: f64) -> Option<f64> {
        let n = self.log_y.len();
        let i = match self.log_y.binary_search_by(|p| p.total_cmp(&ell)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        if self.log_y[i + 1] <= self.log_y[i] {
            return None;
        }
        Some(lerp_log(self.log_y[i], self.log_y[i + 1], self.log_x[i], self.log_x[i + 1], ell))
    }

    fn elasticity(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1, y0, y1) = (self.log_x[i], self.log_x[i + 1], self.log_y[i], self.log_y[i + 1]);
        if y1 <= y0 {
            return 0.0;
        }
        let log_slope = log_sub_exp(y1, y0) - log_sub_exp(x1, x0);
        (x + log_slope - self.eval(x)).exp()
    }
}

/// Linear interpolation in `(X, Y)` where both coordinates are given as logs.
fn lerp_log(lx0: f64, lx1: f64, ly0: f64, ly1: f64, lx: f64) -> f64 {
    let span = log_sub_exp(lx1, lx0);
    if lx >= lx0 && lx <= lx1 {
        let lt = if lx == lx0 { f64::NEG_INFINITY } else { log_sub_exp(lx, lx0) - span };
        let l1t = if lx == lx1 { f64::NEG_INFINITY } else { log_sub_exp(lx1, lx) - span };
        log_add_exp(l1t + ly0, lt + ly1)
    } else {
        // Linear extension of the end segment.
        let (y0, y1) = (ly0.exp(), ly1.exp());
        let (x0, x1) = (lx0.exp(), lx1.exp());
        let y = y0 + (y1 - y0) * (lx.exp() - x0) / (x1 - x0);
        y.max(f64::MIN_POSITIVE).ln()
    }
}

fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let i = match xs.binary_search_by(|p| p.total_cmp(&x)) {
        Ok(i) => return ys[i],
        Err(0) => 0,
        Err(i) => (i - 1).min(n - 2),
    };
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + t * (ys[i + 1] - ys[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scales::s::SScale;

    #[test]
    fn identity_and_log() {
        let id = PhiScale::builtin(BuiltinPhi::Power, 1.0).unwrap();
        assert!((id.eval(7.5) - 7.5).abs() < 1e-12);
        assert!((id.inverse(3.25).unwrap() - 3.25).abs() < 1e-12);
        let lg = PhiScale::log();
        let r = 50.0f64;
        assert!((lg.eval(r) - r.ln()).abs() < 1e-12);
        assert!((lg.deriv(r).unwrap() - 1.0 / r).abs() < 1e-15);
        assert!((lg.deriv2(r).unwrap() + 1.0 / (r * r)).abs() < 1e-15);
    }

    #[test]
    fn exp_log_power_half_at_e4() {
        let p = PhiScale::builtin(BuiltinPhi::ExpLogPower, 0.5).unwrap();
        let e4 = 4.0f64.exp();
        assert!((p.eval(e4) - 2.0f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for (k, a) in [(BuiltinPhi::LogPower, 1.5), (BuiltinPhi::ExpLogPower, 0.5), (BuiltinPhi::Power, 0.5)] {
            let p = PhiScale::builtin(k, a).unwrap();
            let r = 40.0f64;
            let h = 1e-4;
            let fd1 = (p.eval(r + h) - p.eval(r - h)) / (2.0 * h);
            let fd2 = (p.eval(r + h) - 2.0 * p.eval(r) + p.eval(r - h)) / (h * h);
            assert!((fd1 - p.deriv(r).unwrap()).abs() < 1e-7 * fd1.abs().max(1.0), "{k:?}");
            assert!((fd2 - p.deriv2(r).unwrap()).abs() < 1e-3 * fd2.abs().max(1e-3), "{k:?}");
        }
    }

    #[test]
    fn non_positive_param_rejected_and_out_of_range_warned() {
        assert!(PhiScale::builtin(BuiltinPhi::Power, 0.0).is_err());
        assert!(PhiScale::builtin(BuiltinPhi::LogPower, -1.0).is_err());
        assert!(PhiScale::builtin(BuiltinPhi::Power, 1.5).unwrap().warning().is_some());
        assert!(PhiScale::builtin(BuiltinPhi::LogPower, 1.5).unwrap().warning().is_none());
    }

    #[test]
    fn hp_inverse_roundtrip() {
        let ys: Vec<f64> = (1..40).map(|k| 0.37 * k as f64).collect();
        for (k, a) in [(BuiltinPhi::LogPower, 1.0), (BuiltinPhi::ExpLogPower, 0.5), (BuiltinPhi::Power, 0.5)] {
            let p = PhiScale::builtin(k, a).unwrap();
            assert!(p.inverse_roundtrip_error(&ys, 160).unwrap() < 1e-20);
        }
    }

    #[test]
    fn adversary_hits_breakpoints() {
        let s = SScale::power(2.0).unwrap();
        let phi = PhiScale::polygonal_adversary(&s, 2.5, 1e300).unwrap();
        let PhiKind::Polygonal(p) = phi.kind() else { panic!() };
        for i in (0..p.log_x.len()).step_by(2) {
            let x = p.log_x[i];
            assert!((phi.log_phi(x) - x.ln()).abs() < 1e-12);
            if i + 1 < p.log_x.len() {
                let ls = s.log_s(x);
                assert!((phi.log_phi(ls) - ls).abs() < 1e-9 * ls.abs().max(1.0));
            }
        }
        assert!(phi.valid_log_r_max() > 1e17);
    }

    #[test]
    fn table_interpolates_power_law() {
        let rows: Vec<TableRow> = [10.0f64, 100.0, 1000.0]
            .iter()
            .map(|&r| TableRow { r, phi_r: r.sqrt(), dphi: Some(0.5 / r.sqrt()), d2phi: Some(-0.25 * r.powf(-1.5)) })
            .collect();
        let t = PhiScale::from_table(&rows).unwrap();
        assert!((t.eval(31.0) - 31f64.sqrt()).abs() < 1e-9);
        assert!((t.elasticity(30f64.ln()).unwrap() - 0.5).abs() < 1e-12);
        assert!((t.curvature(30f64.ln()).unwrap() + 0.5).abs() < 1e-12);
    }
}
