//! φ-order and φ-exponent estimators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{bin_maxima, least_squares};
use crate::grid::RadiusGrid;
use crate::models::ZeroSequence;
use crate::scales::PhiScale;

pub const DEFAULT_BINS: usize = 12;
/// Above this residual spread an estimate is flagged as low-confidence.
pub const SPREAD_LIMIT: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "T")]
    T,
    #[serde(rename = "logM")]
    LogM,
    #[serde(rename = "n")]
    SmallN,
    #[serde(rename = "N")]
    BigN,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    pub rho: f64,
    pub infinite: bool,
    pub quantity: Quantity,
    /// `(log φ(r), log X(r))`.
    pub fit_points: Vec<(f64, f64)>,
    pub envelope_slope: f64,
    pub intercept: f64,
    pub residual_spread: f64,
    pub low_confidence: bool,
    pub note: Option<String>,
}

impl OrderEstimate {
    /// Comparison tolerance `max(0.1, 3·spread)`.
    pub fn tolerance(&self) -> f64 {
        (3.0 * self.residual_spread).max(0.1)
    }
}

/// Upper-envelope fit of `log X` against `log φ(r)` for samples `(log r, X)`.
pub fn order_estimate(samples: &[(f64, f64)], phi: &PhiScale, quantity: Quantity) -> Result<OrderEstimate> {
    order_estimate_bins(samples, phi, quantity, DEFAULT_BINS)
}

pub fn order_estimate_bins(samples: &[(f64, f64)], phi: &PhiScale, quantity: Quantity, bins: usize) -> Result<OrderEstimate> {
    if samples.len() < 30 {
        return Err(Error::InsufficientGrid(format!("{} samples, need at least 30", samples.len())));
    }
    let lphi: Vec<f64> = samples.iter().map(|&(x, _)| phi.log_phi(x)).collect();
    let lo = lphi.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = lphi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi - lo >= 3.0) {
        return Err(Error::InsufficientGrid(format!("log φ spans {:.3}, need at least 3", hi - lo)));
    }
    if samples.iter().any(|s| s.1.is_nan()) {
        return Err(Error::InvalidInput("NaN sample".into()));
    }
    if samples.iter().any(|s| s.1 == f64::INFINITY) {
        return Ok(OrderEstimate {
            rho: f64::INFINITY,
            infinite: true,
            quantity,
            fit_points: Vec::new(),
            envelope_slope: f64::INFINITY,
            intercept: f64::NAN,
            residual_spread: 0.0,
            low_confidence: false,
            note: Some("infinite sample".into()),
        });
    }
    let fit_points: Vec<(f64, f64)> =
        lphi.iter().zip(samples).filter(|(_, s)| s.1 > 0.0).map(|(&l, s)| (l, s.1.ln())).collect();
    let positive_tail = fit_points.iter().filter(|p| p.0 >= lo + 0.5 * (hi - lo)).count();
    if fit_points.len() < 3 || positive_tail < 2 {
        return Ok(OrderEstimate {
            rho: 0.0,
            infinite: false,
            quantity,
            fit_points,
            envelope_slope: 0.0,
            intercept: f64::NAN,
            residual_spread: 0.0,
            low_confidence: false,
            note: Some("quantity vanishes or is bounded on the tail".into()),
        });
    }
    let maxima = bin_maxima(&fit_points, bins);
    let fit = least_squares(maxima.iter().copied())
        .ok_or_else(|| Error::InsufficientGrid("envelope fit needs at least two bins".into()))?;
    let low = fit.slope < 0.0 || fit.rms > SPREAD_LIMIT;
    let note = if fit.slope < 0.0 {
        Some("negative envelope slope".into())
    } else if fit.rms > SPREAD_LIMIT {
        Some(format!("envelope residual spread {:.3} exceeds {SPREAD_LIMIT}", fit.rms))
    } else {
        None
    };
    Ok(OrderEstimate {
        rho: fit.slope.max(0.0),
        infinite: false,
        quantity,
        fit_points,
        envelope_slope: fit.slope,
        intercept: fit.intercept,
        residual_spread: fit.rms,
        low_confidence: low,
        note,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Convergent,
    Divergent,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentMethod {
    OrderOfN,
    SumDichotomy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    pub lambda: f64,
    /// `[λ_lo, λ_hi]`; degenerate for the order-of-n method.
    pub bracket: (f64, f64),
    pub method: ExponentMethod,
    pub mu_scan: Vec<(f64, Verdict)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub order_of_n: ExponentEstimate,
    pub sum_dichotomy: ExponentEstimate,
    pub order_fit: OrderEstimate,
    pub scan_step: f64,
    /// `|λ_order − λ_sum|` within the scan resolution (bracket half-width plus one step).
    pub agree: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuScan {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Default for MuScan {
    fn default() -> Self {
        Self { lo: 0.0, hi: 4.0, step: 0.025 }
    }
}

/// Classifies `Σ a_n` with `a_n = m_n φ(r_n)^{−μ}` by the fitted decay exponent
/// `p = −d log a_n / d log n` over the second half of the available terms.
fn classify_sum(log_phi_terms: &[(f64, f64)], mu: f64) -> Verdict {
    if mu <= 0.0 {
        return Verdict::Divergent;
    }
    let n = log_phi_terms.len();
    let pts = log_phi_terms[n / 2..].iter().map(|&(ln_n, lphi)| (ln_n, -mu * lphi));
    match least_squares(pts) {
        Some(f) if -f.slope > 1.05 => Verdict::Convergent,
        Some(f) if -f.slope < 0.95 => Verdict::Divergent,
        _ => Verdict::Indeterminate,
    }
}

/// φ-exponent of convergence by the order of `n(r)` on `grid` and by the sum dichotomy
/// over the terms with `log r_n ≤ max(grid)`.
pub fn phi_exponent(zeros: &ZeroSequence, phi: &PhiScale, grid: &RadiusGrid, scan: &MuScan) -> Result<ExponentReport> {
    let horizon = *grid.log_r().last().expect("grid is non-empty");
    let terms = zeros.terms_upto(horizon);
    if terms < 8 {
        return Err(Error::InsufficientGrid(format!("only {terms} zeros below the horizon log r = {horizon}")));
    }
    let mut pts = Vec::with_capacity(terms);
    let mut count = 0u64;
    for k in 1..=terms {
        let z = zeros.term(k).expect("term within horizon");
        count += z.multiplicity as u64;
        // repeated terms count with multiplicity: index by the running count
        pts.push(((count as f64).ln(), phi.log_phi(z.log_modulus)));
    }
    let samples: Vec<(f64, f64)> = grid.log_r().iter().map(|&x| (x, zeros.count_upto(x) as f64)).collect();
    let fit = order_estimate(&samples, phi, Quantity::SmallN)?;
    let mut mu_scan = Vec::new();
    let steps = ((scan.hi - scan.lo) / scan.step).round() as usize;
    for k in 0..=steps {
        let mu = scan.lo + k as f64 * scan.step;
        mu_scan.push((mu, classify_sum(&pts, mu)));
    }
    let first_conv = mu_scan.iter().position(|(_, v)| *v == Verdict::Convergent);
    let (lo, hi) = match first_conv {
        Some(i) => {
            let last_div = mu_scan[..i].iter().rposition(|(_, v)| *v == Verdict::Divergent);
            (last_div.map_or(scan.lo, |j| mu_scan[j].0), mu_scan[i].0)
        }
        None => (mu_scan.last().map_or(scan.hi, |m| m.0), f64::INFINITY),
    };
    let lambda_sum = if hi.is_finite() { 0.5 * (lo + hi) } else { f64::INFINITY };
    let agree = (fit.rho - lambda_sum).abs() <= 0.5 * (hi - lo) + scan.step;
    Ok(ExponentReport {
        order_of_n: ExponentEstimate {
            lambda: fit.rho,
            bracket: (fit.rho, fit.rho),
            method: ExponentMethod::OrderOfN,
            mu_scan: Vec::new(),
        },
        sum_dichotomy: ExponentEstimate { lambda: lambda_sum, bracket: (lo, hi), method: ExponentMethod::SumDichotomy, mu_scan },
        order_fit: fit,
        scan_step: scan.step,
        agree,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DichotomyResult {
    pub verdict: Verdict,
    /// Fitted slope of `log(T φ^{−μ−1})` against `log φ` on the tail.
    pub slope: f64,
    /// `∫ T φ^{−μ} d(log φ)` over the sampled tail.
    pub tail_integral: f64,
}

/// Convergence of `∫^∞ φ′(t) T(t) / φ(t)^{μ+1} dt` from samples `(log r, T)`.
pub fn integral_dichotomy(samples: &[(f64, f64)], phi: &PhiScale, mu: f64, delta: f64) -> Result<DichotomyResult> {
    if samples.len() < 4 {
        return Err(Error::InsufficientGrid("integral dichotomy needs at least four samples".into()));
    }
    for w in samples.windows(2) {
        if w[1].1 < w[0].1 - 1e-12 * w[0].1.abs().max(1.0) {
            return Err(Error::InvalidInput(format!("T decreases between log r = {} and {}", w[0].0, w[1].0)));
        }
    }
    let tail = &samples[samples.len() / 2..];
    let pts: Vec<(f64, f64)> = tail.iter().filter(|s| s.1 > 0.0).map(|&(x, t)| {
        let l = phi.log_phi(x);
        (l, t.ln() - (mu + 1.0) * l)
    }).collect();
    let integrand: Vec<(f64, f64)> = tail.iter().map(|&(x, t)| {
        let l = phi.log_phi(x);
        (l, t * (-mu * l).exp())
    }).collect();
    let tail_integral = integrand.windows(2).map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0)).sum();
    let first = samples[0].1;
    let last = samples[samples.len() - 1].1;
    let unbounded = last > first;
    let slope = least_squares(pts.iter().copied()).map_or(f64::NAN, |f| f.slope);
    let verdict = if mu <= 0.0 && unbounded {
        Verdict::Divergent
    } else if slope < -1.0 - delta {
        Verdict::Convergent
    } else if slope > -1.0 + delta {
        Verdict::Divergent
    } else {
        Verdict::Indeterminate
    };
    Ok(DichotomyResult { verdict, slope, tail_integral })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::scales::BuiltinPhi;

    fn loglog(a: f64, b: f64, n: usize) -> RadiusGrid {
        GridSpec::LogLogUniform { log_r_min: a, log_r_max: b, points: n }.build().unwrap()
    }

    #[test]
    fn synthetic_square_of_phi() {
        let phi = PhiScale::log();
        let g = loglog(10.0, 2000.0, 100);
        let samples: Vec<(f64, f64)> = g.log_r().iter().map(|&x| (x, phi.log_phi(x).exp().powi(2))).collect();
        let e = order_estimate(&samples, &phi, Quantity::T).unwrap();
        assert!((e.rho - 2.0).abs() < 1e-6, "{e:?}");
    }

    #[test]
    fn too_few_samples() {
        let phi = PhiScale::log();
        let s: Vec<(f64, f64)> = (0..10).map(|k| (10.0 + k as f64, 1.0)).collect();
        assert!(matches!(order_estimate(&s, &phi, Quantity::T), Err(Error::InsufficientGrid(_))));
    }

    #[test]
    fn exponents_of_closed_form_sequences() {
        let g = loglog(10.0, 2000.0, 200);
        let f = ZeroSequence::example_f(PhiScale::log(), 0.5).unwrap();
        let r = phi_exponent(&f, &PhiScale::log(), &g, &MuScan::default()).unwrap();
        assert!((r.sum_dichotomy.lambda - 0.5).abs() <= 0.05, "{:?}", r.sum_dichotomy.bracket);
        assert!(r.agree, "{} vs {}", r.order_of_n.lambda, r.sum_dichotomy.lambda);

        let wide = loglog(10.0, 1e250, 200);
        let gseq = ZeroSequence::example_g(PhiScale::log(), 2.0).unwrap();
        let r = phi_exponent(&gseq, &PhiScale::log(), &wide, &MuScan::default()).unwrap();
        assert!(r.sum_dichotomy.bracket.1 < 0.05);

        let sq = ZeroSequence::example_f(PhiScale::identity(), 0.5).unwrap();
        let lin = GridSpec::LogUniform { log_r_min: 2.0, log_r_max: 20.0, points: 200 }.build().unwrap();
        let r = phi_exponent(&sq, &PhiScale::identity(), &lin, &MuScan::default()).unwrap();
        assert!((r.sum_dichotomy.lambda - 0.5).abs() <= 0.05);
        assert!((r.order_of_n.lambda - 0.5).abs() <= 0.05, "{:?}", r.order_fit);
    }

    #[test]
    fn dichotomy_on_power_of_phi() {
        let phis = [
            PhiScale::log(),
            PhiScale::builtin(BuiltinPhi::Power, 0.5).unwrap(),
            PhiScale::builtin(BuiltinPhi::ExpLogPower, 0.5).unwrap(),
        ];
        for phi in &phis {
            let g = loglog(10.0, 600.0, 100);
            for rho in [0.5, 1.0, 2.0] {
                let s: Vec<(f64, f64)> = g.log_r().iter().map(|&x| (x, (rho * phi.log_phi(x)).exp())).collect();
                assert_eq!(integral_dichotomy(&s, phi, rho + 0.5, 0.05).unwrap().verdict, Verdict::Convergent);
                assert_eq!(integral_dichotomy(&s, phi, rho - 0.5, 0.05).unwrap().verdict, Verdict::Divergent);
                assert_eq!(integral_dichotomy(&s, phi, 0.0, 0.05).unwrap().verdict, Verdict::Divergent);
            }
        }
    }

    #[test]
    fn non_monotone_rejected() {
        let s = vec![(1.0, 1.0), (2.0, 3.0), (3.0, 2.0), (4.0, 5.0)];
        assert!(matches!(integral_dichotomy(&s, &PhiScale::log(), 1.0, 0.05), Err(Error::InvalidInput(_))));
    }
}
