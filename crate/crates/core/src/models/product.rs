//! Genus-zero canonical products `∏ (1 − z/z_n)` and quotients `C z^m P₁/P₂`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::{log1m_exp, log_add_exp, log_one_minus, unit_roundoff, wrap_angle};
use crate::scales::{PhiKind, PhiScale};

use super::{LogValue, Zero};

/// Default bound on the tail contribution to `log|P|`.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
/// Largest number of zeros materialized for one circle.
pub const MAX_TERMS: usize = 1 << 24;
/// `|log(1 − w)| ≤ C|w|` for `|w| ≤ e^{−2}`.
const TAIL_FACTOR: f64 = 1.16;
/// Zeros beyond `e^{FAR_GAP} r` are evaluated through power sums.
const FAR_GAP: f64 = 2.0;
const MAX_MOMENTS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroGenerator {
    /// `φ(r_n) = n^{1/κ}`.
    ExampleF { phi: PhiScale, kappa: f64 },
    /// `φ(r_n) = c^n`.
    ExampleG { phi: PhiScale, c: f64 },
    /// Finite list sorted by modulus.
    Explicit(Vec<Zero>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSequence {
    generator: ZeroGenerator,
    /// Common argument of generated zeros.
    ray: f64,
    /// The input was already sorted by modulus.
    monotone: bool,
}

impl ZeroSequence {
    pub fn example_f(phi: PhiScale, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa < 1.0) {
            return Err(Error::InvalidParameter(format!("κ must lie in (0, 1), got {kappa}")));
        }
        require_builtin(&phi)?;
        // Zeros must be thin enough for genus zero: limsup rφ′/φ < 1/κ.
        let tail_e1 = (0..50).map(|k| phi.elasticity(10f64.powf(1.0 + k as f64 / 10.0)).unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
        if !(tail_e1 < 1.0 / kappa) {
            return Err(Error::NotEntire(format!("rφ′/φ reaches {tail_e1} ≥ 1/κ = {}", 1.0 / kappa)));
        }
        let seq = Self { generator: ZeroGenerator::ExampleF { phi, kappa }, ray: 0.0, monotone: true };
        seq.check_summable()?;
        Ok(seq)
    }

    pub fn example_g(phi: PhiScale, c: f64) -> Result<Self> {
        if !(c > 1.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("c must exceed 1, got {c}")));
        }
        require_builtin(&phi)?;
        let seq = Self { generator: ZeroGenerator::ExampleG { phi, c }, ray: 0.0, monotone: true };
        seq.check_summable()?;
        Ok(seq)
    }

    pub fn explicit(mut zeros: Vec<Zero>) -> Result<Self> {
        if zeros.iter().any(|z| !z.log_modulus.is_finite() || z.multiplicity == 0) {
            return Err(Error::InvalidInput("explicit zeros need finite nonzero moduli and positive multiplicities".into()));
        }
        let monotone = zeros.windows(2).all(|w| w[0].log_modulus <= w[1].log_modulus);
        zeros.sort_by(|a, b| a.log_modulus.total_cmp(&b.log_modulus));
        Ok(Self { generator: ZeroGenerator::Explicit(zeros), ray: 0.0, monotone })
    }

    /// Places generated zeros on the ray `arg z = theta`.
    pub fn with_ray(mut self, theta: f64) -> Self {
        self.ray = theta;
        self
    }

    pub fn generator(&self) -> &ZeroGenerator {
        &self.generator
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn len(&self) -> Option<usize> {
        match &self.generator {
            ZeroGenerator::Explicit(z) => Some(z.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// `log r_n` for `n ≥ 1`.
    pub fn log_modulus(&self, n: usize) -> Option<f64> {
        if n == 0 {
            return None;
        }
        match &self.generator {
            ZeroGenerator::ExampleF { phi, kappa } => {
                let nf = n as f64;
                match phi.kind() {
                    PhiKind::LogPower { alpha } => Some(nf.powf(1.0 / (kappa * alpha))),
                    PhiKind::Power { beta } => Some(nf.ln() / (kappa * beta)),
                    PhiKind::ExpLogPower { beta } => Some((nf.ln() / kappa).powf(1.0 / beta)),
                    _ => phi.inverse_log(nf.ln() / kappa),
                }
            }
            ZeroGenerator::ExampleG { phi, c } => {
                let nf = n as f64;
                match phi.kind() {
                    PhiKind::LogPower { alpha } => Some(c.powf(nf / alpha)),
                    PhiKind::Power { beta } => Some(nf * c.ln() / beta),
                    PhiKind::ExpLogPower { beta } => Some((nf * c.ln()).powf(1.0 / beta)),
                    _ => phi.inverse_log(nf * c.ln()),
                }
            }
            ZeroGenerator::Explicit(z) => z.get(n - 1).map(|z| z.log_modulus),
        }
    }

    /// The `n`-th zero, `n ≥ 1`.
    pub fn term(&self, n: usize) -> Option<Zero> {
        match &self.generator {
            ZeroGenerator::Explicit(z) => n.checked_sub(1).and_then(|i| z.get(i)).copied(),
            _ => self.log_modulus(n).map(|g| Zero { log_modulus: g, arg: self.ray, multiplicity: 1 }),
        }
    }

    /// Number of terms (not multiplicities) with `log r_n ≤ x`.
    pub fn terms_upto(&self, x: f64) -> usize {
        let estimate = match &self.generator {
            ZeroGenerator::Explicit(z) => return z.partition_point(|z| z.log_modulus <= x),
            ZeroGenerator::ExampleF { phi, kappa } => (kappa * phi.log_phi(x)).exp(),
            ZeroGenerator::ExampleG { phi, c } => phi.log_phi(x) / c.ln(),
        };
        let mut n = if estimate.is_finite() && estimate > 0.0 { estimate.floor().min(MAX_TERMS as f64 * 4.0) as usize } else { 0 };
        while n >= 1 && self.log_modulus(n).is_none_or(|g| g > x) {
            n -= 1;
        }
        while self.log_modulus(n + 1).is_some_and(|g| g <= x) {
            n += 1;
        }
        n
    }

    /// Count with multiplicity of zeros with `log r_n ≤ x`.
    pub fn count_upto(&self, x: f64) -> u64 {
        match &self.generator {
            ZeroGenerator::Explicit(z) => z.iter().take_while(|z| z.log_modulus <= x).map(|z| z.multiplicity as u64).sum(),
            _ => self.terms_upto(x) as u64,
        }
    }

    pub fn materialize(&self, terms: usize) -> Result<Vec<Zero>> {
        if terms > MAX_TERMS {
            return Err(Error::InvalidInput(format!("{terms} zeros exceed the materialization cap {MAX_TERMS}")));
        }
        Ok((1..=terms).map_while(|n| self.term(n)).collect())
    }

    pub fn materialize_upto(&self, x: f64) -> Result<Vec<Zero>> {
        self.materialize(self.terms_upto(x))
    }

    /// Upper bound for `log Σ_{n>N} m_n / r_n`, `+∞` when no bound is available at this `N`.
    pub fn log_tail(&self, n_terms: usize) -> f64 {
        match &self.generator {
            ZeroGenerator::Explicit(z) => z
                .iter()
                .skip(n_terms)
                .fold(f64::NEG_INFINITY, |acc, z| log_add_exp(acc, (z.multiplicity as f64).ln() - z.log_modulus)),
            ZeroGenerator::ExampleG { .. } => self.convex_tail(n_terms),
            ZeroGenerator::ExampleF { phi, kappa } => match phi.kind() {
                PhiKind::LogPower { alpha } if 1.0 / (kappa * alpha) >= 1.0 => self.convex_tail(n_terms),
                PhiKind::LogPower { alpha } => {
                    // n^a / ln n is increasing once ln n ≥ 1/a
                    let a = 1.0 / (kappa * alpha);
                    if ((n_terms + 1) as f64).ln() < 1.0 / a {
                        return f64::INFINITY;
                    }
                    self.p_series_tail(n_terms)
                }
                _ => self.p_series_tail(n_terms),
            },
        }
    }

    /// `g(n) = log r_n` convex in `n`: `g(n) ≥ g(N+1) + (n−N−1)·(g(N+1) − g(N))`.
    fn convex_tail(&self, n_terms: usize) -> f64 {
        if n_terms == 0 {
            return f64::INFINITY;
        }
        let (Some(a), Some(b)) = (self.log_modulus(n_terms), self.log_modulus(n_terms + 1)) else {
            return f64::INFINITY;
        };
        let d = b - a;
        if !(d > 0.0) {
            return f64::INFINITY;
        }
        -b - log1m_exp(-d)
    }

    /// With `p = g(N+1)/ln(N+1)` and `g(n)/ln n` non-decreasing, `Σ_{n>N} n^{−p} ≤ N^{1−p}/(p−1)`.
    fn p_series_tail(&self, n_terms: usize) -> f64 {
        if n_terms == 0 {
            return f64::INFINITY;
        }
        let Some(g) = self.log_modulus(n_terms + 1) else {
            return f64::INFINITY;
        };
        let p = g / ((n_terms + 1) as f64).ln();
        if !(p > 1.0) {
            return f64::INFINITY;
        }
        (1.0 - p) * (n_terms as f64).ln() - (p - 1.0).ln()
    }

    fn check_summable(&self) -> Result<()> {
        let ZeroGenerator::ExampleF { phi, kappa } = &self.generator else {
            return Ok(());
        };
        match phi.kind() {
            PhiKind::Power { beta } if kappa * beta >= 1.0 => {
                Err(Error::NotEntire(format!("Σ 1/r_n ~ Σ n^{{−{}}} diverges", 1.0 / (kappa * beta))))
            }
            PhiKind::ExpLogPower { beta } if *beta > 1.0 => {
                Err(Error::NotEntire("Σ 1/r_n diverges for exp(log^β r) with β > 1".into()))
            }
            _ => Ok(()),
        }
    }
}

fn require_builtin(phi: &PhiScale) -> Result<()> {
    if phi.is_builtin() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("example products need a closed-form φ".into()))
    }
}

/// Materialized zeros for one circle together with the tail bound.
///
/// Zeros with `|z_n| ≥ e²r` are folded into the moments `T_j = Σ m (r/z_n)^j`, so each
/// evaluation costs one pass over the near zeros plus a short power series.
#[derive(Clone, Debug)]
pub struct PreparedProduct {
    /// Zeros inside `|z| < e²r`.
    pub zeros: Vec<Zero>,
    /// `T_1, T_2, …` for the far zeros at the prepared radius.
    moments: Vec<Complex64>,
    /// Rounding and truncation bound on the moment series.
    moment_error: f64,
    log_r: f64,
    /// Bound on the unmaterialized contribution to `log|P|`.
    pub tail_error: f64,
}

impl PreparedProduct {
    fn new(all: Vec<Zero>, x: f64, tail_error: f64, tol: f64) -> Self {
        let u = unit_roundoff();
        let (zeros, far): (Vec<Zero>, Vec<Zero>) = all.into_iter().partition(|z| z.log_modulus < x + FAR_GAP);
        let mut moments = Vec::new();
        let mut moment_error = 0.0;
        if !far.is_empty() {
            // weighted |w_n| for the truncation bound |Σ_{j>J} w^j/j| ≤ |w|^{J+1}/((J+1)(1−|w|))
            let a: Vec<(f64, f64)> = far.iter().map(|z| ((x - z.log_modulus).exp(), z.multiplicity as f64)).collect();
            let base: Vec<Complex64> = a.iter().zip(&far).map(|(&(an, _), z)| Complex64::from_polar(an, -z.arg)).collect();
            let mut powers = base.clone();
            let mut abs_powers: Vec<f64> = a.iter().map(|p| p.0).collect();
            for j in 1..=MAX_MOMENTS {
                let mut t = Complex64::new(0.0, 0.0);
                let mut mag = 0.0;
                for ((w, aw), (_, m)) in powers.iter().zip(&abs_powers).zip(&a) {
                    t += w * m;
                    mag += aw * m;
                }
                moments.push(t);
                moment_error += (far.len() as f64 + 2.0) * u * mag / j as f64;
                let rest: f64 = a.iter().zip(&abs_powers).map(|(&(an, m), aw)| m * aw * an / (1.0 - an)).sum::<f64>() / (j + 1) as f64;
                if rest <= tol || j == MAX_MOMENTS {
                    moment_error += rest;
                    break;
                }
                for (((w, aw), b), &(an, _)) in powers.iter_mut().zip(abs_powers.iter_mut()).zip(&base).zip(&a) {
                    *w *= b;
                    *aw *= an;
                }
            }
        }
        Self { zeros, moments, moment_error, log_r: x, tail_error }
    }

    /// Evaluates at `log r = x`, which must be the radius the product was prepared for.
    pub fn eval(&self, x: f64, theta: f64) -> LogValue {
        debug_assert!(x == self.log_r, "prepared at {} but evaluated at {x}", self.log_r);
        let u = unit_roundoff();
        let mut log_abs = 0.0;
        let mut arg = 0.0;
        let mut err = self.tail_error + self.moment_error;
        for z in &self.zeros {
            let a = x - z.log_modulus;
            let b = theta - z.arg;
            let (l, t) = log_one_minus(a, b);
            if l == f64::NEG_INFINITY {
                return LogValue::zero();
            }
            let m = z.multiplicity as f64;
            log_abs += m * l;
            arg += m * t;
            let one_minus = (l - a.max(0.0)).exp();
            let sens = 1.0 + 1.0 / one_minus.max(f64::MIN_POSITIVE);
            err += m * 4.0 * u * (x.abs() + z.log_modulus.abs() + b.abs() + 2.0) * sens + 2.0 * u * log_abs.abs();
        }
        // Σ m log(1 − w_n) = −Σ_j e^{ijθ} T_j / j
        let mut far = Complex64::new(0.0, 0.0);
        for (j, t) in self.moments.iter().enumerate() {
            let k = (j + 1) as f64;
            far -= Complex64::from_polar(1.0, k * theta) * t / k;
        }
        log_abs += far.re;
        arg += far.im;
        LogValue { log_abs, arg: wrap_angle(arg), error_bound: err, pole: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalProduct {
    zeros: ZeroSequence,
    tail_tol: f64,
}

impl CanonicalProduct {
    pub fn new(zeros: ZeroSequence) -> Self {
        Self { zeros, tail_tol: DEFAULT_TAIL_TOL }
    }

    pub fn with_tail_tolerance(mut self, tol: f64) -> Self {
        self.tail_tol = tol;
        self
    }

    pub fn zeros(&self) -> &ZeroSequence {
        &self.zeros
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tol
    }

    /// Materializes zeros out to `e²r` and beyond until the tail bound meets the tolerance.
    pub fn prepare(&self, x: f64) -> Result<PreparedProduct> {
        let mut n = self.zeros.terms_upto(x + 2.0).max(1);
        if let Some(len) = self.zeros.len() {
            n = len;
        }
        let tol_log = self.tail_tol.ln();
        loop {
            let tail = TAIL_FACTOR.ln() + x + self.zeros.log_tail(n);
            if tail <= tol_log || tail == f64::NEG_INFINITY {
                let zeros = match self.zeros.len() {
                    Some(_) => match &self.zeros.generator {
                        ZeroGenerator::Explicit(z) => z.clone(),
                        _ => unreachable!(),
                    },
                    None => self.zeros.materialize(n)?,
                };
                return Ok(PreparedProduct::new(zeros, x, tail.exp(), self.tail_tol));
            }
            if n >= MAX_TERMS {
                return Err(Error::TruncationInsufficient { achieved: tail.exp(), requested: self.tail_tol });
            }
            n = (2 * n).min(MAX_TERMS);
        }
    }

    pub fn eval_log(&self, x: f64, theta: f64) -> Result<LogValue> {
        Ok(self.prepare(x)?.eval(x, theta))
    }

    pub fn zeros_upto(&self, x: f64) -> Result<Vec<Zero>> {
        self.zeros.materialize_upto(x)
    }

    /// `log Σ_n m_n/r_n` over the full sequence.
    pub fn log_reciprocal_sum(&self) -> f64 {
        let n = self.zeros.len().unwrap_or(64);
        let head = (1..=n)
            .filter_map(|k| self.zeros.term(k))
            .fold(f64::NEG_INFINITY, |acc, z| log_add_exp(acc, (z.multiplicity as f64).ln() - z.log_modulus));
        log_add_exp(head, self.zeros.log_tail(n))
    }
}

/// `C z^m P₁/P₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quotient {
    pub constant: Complex64,
    pub power: i64,
    pub numer: CanonicalProduct,
    pub denom: CanonicalProduct,
}

impl Quotient {
    pub fn new(constant: Complex64, power: i64, numer: CanonicalProduct, denom: CanonicalProduct) -> Result<Self> {
        if constant.norm() == 0.0 || !constant.norm().is_finite() {
            return Err(Error::InvalidParameter("quotient constant must be finite and nonzero".into()));
        }
        Ok(Self { constant, power, numer, denom })
    }

    pub fn prepare(&self, x: f64) -> Result<(PreparedProduct, PreparedProduct)> {
        Ok((self.numer.prepare(x)?, self.denom.prepare(x)?))
    }

    pub fn eval_prepared(&self, parts: &(PreparedProduct, PreparedProduct), x: f64, theta: f64) -> LogValue {
        let d = parts.1.eval(x, theta);
        if d.log_abs == f64::NEG_INFINITY {
            return LogValue::pole();
        }
        let m = self.power as f64;
        let head = LogValue {
            log_abs: self.constant.norm().ln() + m * x,
            arg: self.constant.arg() + m * theta,
            error_bound: 4.0 * unit_roundoff() * (1.0 + m.abs() * x.abs()),
            pole: false,
        };
        head.mul(&parts.0.eval(x, theta)).div(&d)
    }

    pub fn eval_log(&self, x: f64, theta: f64) -> Result<LogValue> {
        Ok(self.eval_prepared(&self.prepare(x)?, x, theta))
    }

    pub fn zeros_upto(&self, x: f64) -> Result<Vec<Zero>> {
        let mut out = Vec::new();
        if self.power > 0 {
            out.push(Zero { log_modulus: f64::NEG_INFINITY, arg: 0.0, multiplicity: self.power as u32 });
        }
        out.extend(self.numer.zeros_upto(x)?);
        Ok(out)
    }

    pub fn poles_upto(&self, x: f64) -> Result<Vec<Zero>> {
        let mut out = Vec::new();
        if self.power < 0 {
            out.push(Zero { log_modulus: f64::NEG_INFINITY, arg: 0.0, multiplicity: (-self.power) as u32 });
        }
        out.extend(self.denom.zeros_upto(x)?);
        Ok(out)
    }
}

/// Zero-sequence CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRow {
    pub log_modulus: f64,
    #[serde(default)]
    pub argument: f64,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

fn one() -> u32 {
    1
}

impl From<ZeroRow> for Zero {
    fn from(r: ZeroRow) -> Self {
        Zero { log_modulus: r.log_modulus, arg: r.argument, multiplicity: r.multiplicity }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scales::BuiltinPhi;

    fn f_log_half() -> CanonicalProduct {
        CanonicalProduct::new(ZeroSequence::example_f(PhiScale::log(), 0.5).unwrap())
    }

    #[test]
    fn zeros_at_exp_n_squared() {
        let p = f_log_half();
        let z = p.zeros_upto(5.0).unwrap();
        let lm: Vec<f64> = z.iter().map(|z| z.log_modulus).collect();
        assert_eq!(lm, vec![1.0, 4.0]);
        assert_eq!(p.zeros().count_upto(100.0), 10);
    }

    #[test]
    fn value_at_minus_e() {
        // brute force partial product, n ≤ 10
        let brute: f64 = (1..=10).map(|n: i32| (1.0 - (-(n * n) as f64 + 1.0).exp() * -1.0).ln()).sum();
        let v = f_log_half().eval_log(1.0, std::f64::consts::PI).unwrap();
        assert!((v.log_abs - brute).abs() < 1e-12, "{} vs {brute}", v.log_abs);
        assert!((v.log_abs - 0.742_070_244_446_609).abs() < 1e-12);
        assert!(v.error_bound < 1e-6);
    }

    #[test]
    fn far_zero_moments_match_the_direct_sum() {
        // zeros at n⁴ with a ray, evaluated against every factor summed one by one
        let p = CanonicalProduct::new(ZeroSequence::example_f(PhiScale::identity(), 0.25).unwrap().with_ray(0.7));
        let x = 6.0;
        let prep = p.prepare(x).unwrap();
        assert!(!prep.moments.is_empty() && prep.zeros.len() < 40);
        let all = p.zeros().materialize(200_000).unwrap();
        for theta in [0.0, 0.7, 2.0, -2.9] {
            let direct: f64 = all.iter().map(|z| log_one_minus(x - z.log_modulus, theta - z.arg).0).sum();
            let v = prep.eval(x, theta);
            assert!((v.log_abs - direct).abs() < 1e-10, "θ = {theta}: {} vs {direct}", v.log_abs);
            assert!(v.error_bound < 1e-9);
        }
    }

    #[test]
    fn example_g_counts() {
        let g = ZeroSequence::example_g(PhiScale::log(), 2.0).unwrap();
        assert_eq!(g.count_upto(17.0), 4);
        assert_eq!(g.count_upto(16.0), 4);
        assert_eq!(g.count_upto(15.9), 3);
        assert_eq!(g.log_modulus(3), Some(8.0));
    }

    #[test]
    fn power_phi_zeros_at_squares() {
        let s = ZeroSequence::example_f(PhiScale::identity(), 0.5).unwrap();
        for n in 1..20usize {
            assert!((s.log_modulus(n).unwrap() - ((n * n) as f64).ln()).abs() < 1e-13);
        }
        // Σ_{n>N} 1/n² ≤ 1/N
        let t = s.log_tail(100);
        assert!(t <= (1.0f64 / 100.0).ln() + 1e-12);
        assert!(t >= (1.0f64 / 101.0).ln());
    }

    #[test]
    fn divergent_sequences_rejected() {
        let phi = PhiScale::builtin(BuiltinPhi::Power, 0.5).unwrap();
        assert!(ZeroSequence::example_f(phi, 0.9).is_ok());
        // φ = r², κ = 0.6: rφ′/φ = 2 > 1/κ
        let phi = PhiScale::builtin(BuiltinPhi::Power, 2.0).unwrap();
        let err = ZeroSequence::example_f(phi, 0.6).unwrap_err();
        assert!(matches!(err, Error::NotEntire(_)), "{err:?}");
    }

    #[test]
    fn tail_bounds_dominate_partial_sums() {
        let seqs = [
            ZeroSequence::example_f(PhiScale::log(), 0.5).unwrap(),
            ZeroSequence::example_f(PhiScale::builtin(BuiltinPhi::LogPower, 2.0).unwrap(), 0.9).unwrap(),
            ZeroSequence::example_f(PhiScale::builtin(BuiltinPhi::ExpLogPower, 0.5).unwrap(), 0.5).unwrap(),
            ZeroSequence::example_g(PhiScale::log(), 3.0).unwrap(),
            ZeroSequence::example_g(PhiScale::identity(), 2.0).unwrap(),
        ];
        for s in &seqs {
            for n0 in [3usize, 10, 40] {
                let bound = s.log_tail(n0);
                if !bound.is_finite() {
                    continue;
                }
                let partial = (n0 + 1..n0 + 2000)
                    .filter_map(|k| s.log_modulus(k))
                    .fold(f64::NEG_INFINITY, |acc, g| log_add_exp(acc, -g));
                assert!(partial <= bound + 1e-12, "{:?} N={n0}: {partial} > {bound}", s.generator());
            }
        }
    }

    #[test]
    fn quotient_prepends_origin_zero() {
        let f = f_log_half();
        let g = CanonicalProduct::new(ZeroSequence::example_g(PhiScale::log(), 2.0).unwrap());
        let q = Quotient::new(Complex64::new(1.0, 0.0), 2, f, g).unwrap();
        let z = q.zeros_upto(5.0).unwrap();
        assert_eq!(z[0].log_modulus, f64::NEG_INFINITY);
        assert_eq!(z[0].multiplicity, 2);
        assert_eq!(z.len(), 3);
        let p = q.poles_upto(5.0).unwrap();
        assert_eq!(p.len(), 2);
    }
}
