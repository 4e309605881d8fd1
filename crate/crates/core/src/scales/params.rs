//! Growth parameters α, β, γ, ζ, κ estimated on the tail of a radial grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RadiusGrid;

use super::{PhiScale, SScale};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamOptions {
    /// Spread threshold for the "limit exists" predicate.
    pub limit_spread: f64,
    pub min_points: usize,
    pub min_decades: f64,
}

impl Default for ParamOptions {
    fn default() -> Self {
        Self { limit_spread: 1e-3, min_points: 50, min_decades: 10.0 }
    }
}

/// Ratio sequences evaluated at every tail radius.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TailDiagnostics {
    pub log_r: Vec<f64>,
    pub alpha_ratio: Vec<f64>,
    pub beta_ratio: Vec<f64>,
    pub gamma_ratio: Vec<f64>,
    pub zeta_ratio: Vec<f64>,
    pub kappa_ratio: Vec<f64>,
    pub raw_alpha: f64,
    pub raw_beta: f64,
    pub raw_gamma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub zeta: Option<f64>,
    pub kappa: Option<f64>,
    pub tail_diagnostics: TailDiagnostics,
}

/// `true` when the sequence has settled: spread below `tol · max(1, |value|)`.
pub fn limit_exists(values: &[f64], tol: f64) -> Option<f64> {
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = lo.abs().max(hi.abs()).max(1.0);
    (hi - lo < tol * scale).then(|| *values.last().unwrap())
}

pub fn growth_params(phi: &PhiScale, s: &SScale, grid: &RadiusGrid) -> Result<GrowthParams> {
    growth_params_with(phi, s, grid, &ParamOptions::default())
}

pub fn growth_params_with(phi: &PhiScale, s: &SScale, grid: &RadiusGrid, opts: &ParamOptions) -> Result<GrowthParams> {
    if grid.len() < opts.min_points {
        return Err(Error::InsufficientGrid(format!("{} points, need {}", grid.len(), opts.min_points)));
    }
    let start = grid.log_r()[0].max(phi.log_r0()).max(s.log_r0());
    let decades = (grid.log_r()[grid.len() - 1] - start) / std::f64::consts::LN_10;
    if decades < opts.min_decades {
        return Err(Error::InsufficientGrid(format!("grid spans {decades:.2} decades beyond R0, need {}", opts.min_decades)));
    }
    let mut d = TailDiagnostics::default();
    for &x in grid.tail() {
        let lh = s.log_h(x);
        if !(lh > 0.0) {
            return Err(Error::InadmissibleS(format!("s(r)/r = e^{lh} ≤ 1 at log r = {x}")));
        }
        let lp = phi.log_phi(x);
        if !(lp > 0.0) || !(x > 1.0) {
            return Err(Error::InsufficientGrid(format!("tail point log r = {x} too small for the ratios")));
        }
        let lps = phi.log_phi(s.log_s(x));
        d.log_r.push(x);
        d.alpha_ratio.push(lp / lps);
        d.beta_ratio.push(x.ln() / lp);
        d.gamma_ratio.push(lh.ln() / lp);
        d.zeta_ratio.push(lp / phi.log_phi(2.0 * x));
        d.kappa_ratio.push(x / lp);
    }
    d.raw_alpha = d.alpha_ratio.iter().copied().fold(f64::INFINITY, f64::min);
    d.raw_beta = d.beta_ratio.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    d.raw_gamma = d.gamma_ratio.iter().copied().fold(f64::INFINITY, f64::min);
    let clamp = |v: f64| if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
    Ok(GrowthParams {
        alpha: clamp(d.raw_alpha),
        beta: clamp(d.raw_beta),
        gamma: clamp(d.raw_gamma),
        zeta: limit_exists(&d.zeta_ratio, opts.limit_spread),
        kappa: limit_exists(&d.kappa_ratio, opts.limit_spread),
        tail_diagnostics: d,
    })
}
