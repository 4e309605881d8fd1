//! Minimum modulus of a canonical product outside the exclusion discs around its zeros.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::least_squares;
use crate::grid::RadiusGrid;
use crate::logspace::log_one_minus;
use crate::models::{CanonicalProduct, Zero};
use crate::scales::{PhiScale, SScale};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinModOptions {
    pub epsilon: f64,
    pub theta_samples: usize,
    /// Offsets `10^{−k}`, `k = 1..=near_zero_depth`, placed on both sides of each nearby zero.
    pub near_zero_depth: u32,
    /// Growth slope allowed for the sup ratio over the top decade of `log r`.
    pub slope_limit: f64,
}

impl Default for MinModOptions {
    fn default() -> Self {
        Self { epsilon: 0.5, theta_samples: 512, near_zero_depth: 12, slope_limit: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinModRow {
    pub log_r: f64,
    /// `sup (−log|P|) / (φ(s(r))^{λ+ε} log r)` over the admissible samples.
    pub sup_ratio: f64,
    pub admissible: usize,
    pub excluded: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinModReport {
    pub lambda: f64,
    pub epsilon: f64,
    pub rows: Vec<MinModRow>,
    /// Empirical constant: the sup over all radii.
    pub constant: f64,
    /// Slope of the per-radius sup against `log log r` over the top decade of `log r`.
    pub tail_slope: f64,
    pub bounded: bool,
}

/// `true` when `re^{iθ}` lies in `|z − z_n| ≤ r_n^{−exponent}` for some zero.
pub fn in_exclusion_disc(zeros: &[Zero], log_r: f64, theta: f64, exponent: f64) -> bool {
    zeros.iter().any(|z| {
        // |z − z_n| = r_n |1 − e^{log r − log r_n + i(θ − θ_n)}|
        let d = z.log_modulus + log_one_minus(log_r - z.log_modulus, theta - z.arg).0;
        d <= -exponent * z.log_modulus
    })
}

fn thetas(zeros: &[Zero], log_r: f64, opts: &MinModOptions) -> Vec<f64> {
    let n = opts.theta_samples;
    let mut out: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
    for z in zeros.iter().filter(|z| (z.log_modulus - log_r).abs() < 1.0) {
        for k in 1..=opts.near_zero_depth {
            let h = 10f64.powi(-(k as i32));
            out.push(z.arg + h);
            out.push(z.arg - h);
        }
    }
    out
}

pub fn product_min_modulus_check(
    product: &CanonicalProduct,
    phi: &PhiScale,
    s: &SScale,
    lambda: f64,
    grid: &RadiusGrid,
    opts: &MinModOptions,
) -> Result<MinModReport> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("λ = {lambda} must be finite and non-negative")));
    }
    let exponent = lambda + opts.epsilon;
    let rows: Vec<MinModRow> = grid
        .log_r()
        .par_iter()
        .map(|&x| -> Result<MinModRow> {
            if x <= 0.0 {
                return Err(Error::InvalidParameter("the normalization needs log r > 0".into()));
            }
            let prep = product.prepare(x)?;
            let near = product.zeros_upto(x + 1.0)?;
            let scale = exponent * phi.log_phi(s.log_s(x)) + x.ln();
            let (mut sup, mut adm, mut exc) = (f64::NEG_INFINITY, 0, 0);
            for t in thetas(&near, x, opts) {
                if in_exclusion_disc(&near, x, t, exponent) {
                    exc += 1;
                    continue;
                }
                adm += 1;
                let v = prep.eval(x, t);
                let lhs = -v.log_abs;
                // the ratio keeps the sign of −log|P|; only its size relative to the scale matters
                let ratio = lhs.signum() * (lhs.abs().ln() - scale).exp();
                sup = sup.max(ratio);
            }
            let note = (adm == 0).then(|| "all samples excluded; radius skipped".to_string());
            Ok(MinModRow { log_r: x, sup_ratio: sup, admissible: adm, excluded: exc, note })
        })
        .collect::<Result<_>>()?;
    let used: Vec<&MinModRow> = rows.iter().filter(|r| r.admissible > 0).collect();
    let constant = used.iter().map(|r| r.sup_ratio).fold(f64::NEG_INFINITY, f64::max);
    let top = grid.log_r().last().copied().unwrap_or(0.0);
    let tail = used.iter().filter(|r| r.log_r >= top / 10.0).map(|r| (r.log_r.ln(), r.sup_ratio));
    let tail_slope = least_squares(tail).map_or(f64::NAN, |f| f.slope);
    let bounded = constant.is_finite() && tail_slope < opts.slope_limit;
    Ok(MinModReport { lambda, epsilon: opts.epsilon, rows, constant, tail_slope, bounded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::models::ZeroSequence;

    #[test]
    fn filter_rejects_points_inside_discs() {
        let zeros = [Zero { log_modulus: 2.0, arg: 0.0, multiplicity: 1 }];
        // disc radius e^{-2}, centre e^2 on the real axis
        assert!(in_exclusion_disc(&zeros, (2f64.exp() + 0.5 * (-2f64).exp()).ln(), 0.0, 1.0));
        assert!(!in_exclusion_disc(&zeros, (2f64.exp() + 2.0 * (-2f64).exp()).ln(), 0.0, 1.0));
        assert!(!in_exclusion_disc(&zeros, 2.0, 0.5, 1.0));
    }

    #[test]
    fn example_g_ratio_is_bounded() {
        let p = CanonicalProduct::new(ZeroSequence::example_g(PhiScale::log(), 2.0).unwrap());
        let grid = GridSpec::LogUniform { log_r_min: 10.0, log_r_max: 300.0, points: 80 }.build().unwrap();
        let rep = product_min_modulus_check(&p, &PhiScale::log(), &SScale::power(2.0).unwrap(), 0.0, &grid, &MinModOptions::default())
            .unwrap();
        assert!(rep.bounded, "{} {}", rep.constant, rep.tail_slope);
    }
}
