//! Sampled admissibility checks for a pair (φ, s).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RadiusGrid;
use crate::logspace::log_add_exp;

use super::{PhiScale, SScale};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    /// First radius (as `log r`) where the check failed.
    pub witness_log_r: Option<f64>,
    /// Tail statistic, when the check is a `limsup < ∞` type.
    pub tail_max: Option<f64>,
}

impl Check {
    fn from_witness(w: Option<f64>) -> Self {
        Self { holds: w.is_none(), witness_log_r: w, tail_max: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthCondition {
    /// `limsup φ′(s)s′r/φ(s) < 1/λ`
    Below,
    /// `liminf φ′(s)s′r/φ(s) ≥ 1/λ`
    AtLeast,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub phi_restriction: Check,
    pub s_range: Check,
    pub s_ratio_liminf: Check,
    pub subadditive: Check,
    pub subadditive_pairs: usize,
    pub s_doubling: Check,
    pub young_bounded: Option<Check>,
    pub growth_condition: Option<GrowthCondition>,
    pub growth_quantity_tail: Option<(f64, f64)>,
    pub young_elasticity: Option<Check>,
    pub young_dilation: Check,
    /// Checks that could not run for lack of derivatives.
    pub skipped: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityOptions {
    pub seed: u64,
    pub pairs_per_decade: usize,
    pub max_pairs: usize,
    /// Dilation factor `a` for `limsup s(ar)/s(r)`.
    pub dilation: f64,
    /// Fails derivative checks loudly instead of listing them as skipped.
    pub require_derivatives: bool,
}

impl Default for AdmissibilityOptions {
    fn default() -> Self {
        Self { seed: 0x5eed, pairs_per_decade: 10_000, max_pairs: 100_000, dilation: 2.0, require_derivatives: false }
    }
}

/// A tail statistic is finite and the second half of the tail does not exceed twice the first half.
fn bounded_tail(values: &[f64]) -> (bool, f64) {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return (false, max);
    }
    let mid = values.len() / 2;
    let first = values[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let second = values[mid..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (mid == 0 || second <= 2.0 * first.max(f64::MIN_POSITIVE) || second <= 1e-12, max)
}

pub fn check_admissibility(
    phi: &PhiScale,
    s: &SScale,
    lambda: Option<f64>,
    grid: &RadiusGrid,
) -> Result<AdmissibilityReport> {
    check_admissibility_with(phi, s, lambda, grid, &AdmissibilityOptions::default())
}

pub fn check_admissibility_with(
    phi: &PhiScale,
    s: &SScale,
    lambda: Option<f64>,
    grid: &RadiusGrid,
    opts: &AdmissibilityOptions,
) -> Result<AdmissibilityReport> {
    let xs: Vec<f64> = grid.log_r().iter().copied().filter(|&x| x >= phi.log_r0().max(s.log_r0())).collect();
    if xs.len() < 2 {
        return Err(Error::InsufficientGrid("fewer than two radii beyond R0".into()));
    }
    let tail = &xs[xs.len() / 2..];
    let rel = 1e-12;

    // log r ≤ φ(r) ≤ r  ⇔  log log r ≤ log φ ≤ log r
    let phi_restriction = Check::from_witness(xs.iter().copied().find(|&x| {
        let lp = phi.log_phi(x);
        lp < x.ln() - rel * x.ln().abs() || lp > x + rel * x.abs()
    }));
    // r < s ≤ r²
    let s_range = Check::from_witness(xs.iter().copied().find(|&x| {
        let lh = s.log_h(x);
        !(lh > 0.0) || lh > x * (1.0 + rel)
    }));
    let min_tail_h = tail.iter().map(|&x| s.log_h(x)).fold(f64::INFINITY, f64::min);
    let s_ratio_liminf = Check {
        holds: min_tail_h > 0.0,
        witness_log_r: tail.iter().copied().find(|&x| s.log_h(x) <= 0.0),
        tail_max: Some(min_tail_h),
    };

    let (subadditive, subadditive_pairs) = sample_subadditivity(phi, &xs, opts);

    // s(r) ≤ 2 s(r − 1), with log(r − 1) = x + ln(1 − e^{−x})
    let s_doubling = Check::from_witness(xs.iter().copied().find(|&x| {
        let xm1 = x + (-(-x).exp()).ln_1p();
        let lhs = s.log_s(x);
        let rhs = std::f64::consts::LN_2 + s.log_s(xm1);
        !(lhs <= rhs + rel * lhs.abs())
    }));

    let a = opts.dilation.ln();
    let dil: Vec<f64> = tail.iter().map(|&x| s.log_s(x + a) - s.log_s(x)).collect();
    let (ok, m) = bounded_tail(&dil);
    let young_dilation = Check { holds: ok, witness_log_r: None, tail_max: Some(m) };

    let mut skipped = Vec::new();
    let s_diff = s.flags().claims_differentiable;
    let (young_bounded, young_elasticity) = if s_diff {
        // r² s′/s² = e_s / h
        let yb: Vec<f64> = tail.iter().map(|&x| s.elasticity(x) * (-s.log_h(x)).exp()).collect();
        let (ok, m) = bounded_tail(&yb);
        let ye: Vec<f64> = tail.iter().map(|&x| s.elasticity(x)).collect();
        let (ok2, m2) = bounded_tail(&ye);
        (
            Some(Check { holds: ok, witness_log_r: None, tail_max: Some(m) }),
            Some(Check { holds: ok2, witness_log_r: None, tail_max: Some(m2) }),
        )
    } else {
        skipped.push("young_bounded".to_string());
        skipped.push("young_elasticity".to_string());
        (None, None)
    };

    let mut growth_condition = None;
    let mut growth_quantity_tail = None;
    if let Some(lam) = lambda {
        let q: Option<Vec<f64>> = tail.iter().map(|&x| phi.elasticity(s.log_s(x)).map(|e| e * s.elasticity(x))).collect();
        match q {
            Some(q) if s_diff => {
                let sup = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let inf = q.iter().copied().fold(f64::INFINITY, f64::min);
                let inv = if lam == 0.0 { f64::INFINITY } else { 1.0 / lam };
                growth_quantity_tail = Some((inf, sup));
                growth_condition = Some(if sup.is_finite() && sup < inv {
                    GrowthCondition::Below
                } else if inf >= inv {
                    GrowthCondition::AtLeast
                } else {
                    GrowthCondition::Neither
                });
            }
            _ => skipped.push("growth_condition".to_string()),
        }
    }
    if opts.require_derivatives && !skipped.is_empty() {
        return Err(Error::Capability { skipped });
    }

    Ok(AdmissibilityReport {
        phi_restriction,
        s_range,
        s_ratio_liminf,
        subadditive,
        subadditive_pairs,
        s_doubling,
        young_bounded,
        growth_condition,
        growth_quantity_tail,
        young_elasticity,
        young_dilation,
        skipped,
    })
}

/// Random pairs `a, b` drawn log-uniformly over the grid range.
fn sample_subadditivity(phi: &PhiScale, xs: &[f64], opts: &AdmissibilityOptions) -> (Check, usize) {
    let lo = xs[0];
    let hi = xs[xs.len() - 1];
    let decades = ((hi - lo) / std::f64::consts::LN_10).max(1.0);
    let n = ((decades * opts.pairs_per_decade as f64) as usize).min(opts.max_pairs);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut witness = None;
    for _ in 0..n {
        let la = rng.gen_range(lo..=hi);
        let lb = rng.gen_range(lo..=hi);
        let lsum = log_add_exp(la, lb);
        let lhs = phi.log_phi(lsum);
        let rhs = log_add_exp(phi.log_phi(la), phi.log_phi(lb));
        if lhs > rhs + 1e-12 * rhs.abs().max(1.0) {
            witness = Some(la.max(lb));
            break;
        }
    }
    (Check::from_witness(witness), n)
}

impl AdmissibilityReport {
    /// All unconditional global assumptions hold.
    pub fn global_ok(&self) -> bool {
        self.phi_restriction.holds && self.s_range.holds && self.s_ratio_liminf.holds
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::scales::BuiltinPhi;

    fn grid() -> RadiusGrid {
        GridSpec::LogUniform { log_r_min: 2.0, log_r_max: 60.0, points: 120 }.build().unwrap()
    }

    #[test]
    fn log_with_linear_satisfies_growth_condition() {
        let rep = check_admissibility(&PhiScale::log(), &SScale::linear(2.0).unwrap(), Some(5.0), &grid()).unwrap();
        assert!(rep.global_ok());
        assert_eq!(rep.growth_condition, Some(GrowthCondition::Below));
        assert!(rep.subadditive.holds);
        assert!(rep.s_doubling.holds);
    }

    #[test]
    fn square_young_bounded() {
        let rep = check_admissibility(&PhiScale::log(), &SScale::power(2.0).unwrap(), None, &grid()).unwrap();
        let yb = rep.young_bounded.unwrap();
        assert!(yb.holds);
        // 2/r on the tail
        assert!(yb.tail_max.unwrap() <= 2.0 * (-31.0f64).exp());
    }

    #[test]
    fn exponential_s_fails_doubling_and_range() {
        let g = GridSpec::LogUniform { log_r_min: 2.0, log_r_max: 5.0, points: 30 }.build().unwrap();
        let rep = check_admissibility(&PhiScale::log(), &SScale::exp(), None, &g).unwrap();
        assert!(!rep.s_doubling.holds);
        assert!(!rep.s_range.holds);
    }

    #[test]
    fn zero_lambda_reads_as_infinite_bound() {
        let phi = PhiScale::builtin(BuiltinPhi::Power, 0.5).unwrap();
        let rep = check_admissibility(&phi, &SScale::power(2.0).unwrap(), Some(0.0), &grid()).unwrap();
        assert_eq!(rep.growth_condition, Some(GrowthCondition::Below));
    }

    #[test]
    fn adversary_not_concave_but_restricted() {
        let s = SScale::power(2.0).unwrap();
        let phi = PhiScale::polygonal_adversary(&s, 2.5, 1e300).unwrap();
        let g = GridSpec::LogUniform { log_r_min: 2.6, log_r_max: 1000.0, points: 300 }.build().unwrap();
        let rep = check_admissibility(&phi, &s, None, &g).unwrap();
        assert!(rep.phi_restriction.holds);
    }

    #[test]
    fn capability_error_when_required() {
        let rows: Vec<_> = (1..5)
            .map(|k| crate::scales::TableRow { r: 10f64.powi(k), phi_r: (k as f64) * 3.0, dphi: None, d2phi: None })
            .collect();
        let phi = PhiScale::from_table(&rows).unwrap().with_domain_start(10f64.ln());
        let g = GridSpec::LogUniform { log_r_min: 3.0, log_r_max: 9.0, points: 20 }.build().unwrap();
        let opts = AdmissibilityOptions { require_derivatives: true, ..Default::default() };
        let err = check_admissibility_with(&phi, &SScale::linear(2.0).unwrap(), Some(1.0), &g, &opts).unwrap_err();
        assert!(matches!(err, Error::Capability { .. }));
    }
}
