//! The auxiliary function ψ_μ(t) = (μ+1)φ′/φ − 1/t − φ″/φ′.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RadiusGrid;

use super::PhiScale;

/// `t·ψ_μ(t)` at `x = log t`, in the scale-free form `(μ+1)·e1 − (1 + tφ″/φ′)`.
pub fn t_psi_mu(phi: &PhiScale, mu: f64, x: f64) -> Result<f64> {
    let e1 = phi.elasticity(x).ok_or_else(|| Error::Capability { skipped: vec!["psi_mu".into()] })?;
    if e1 == 0.0 {
        return Err(Error::Singularity { log_r: x });
    }
    let shifted = phi.dlog_r_dphi(x).ok_or_else(|| Error::Capability { skipped: vec!["psi_mu".into()] })?;
    Ok((mu + 1.0) * e1 - shifted)
}

/// `ψ_μ(t)` at `x = log t`.
pub fn psi_mu(phi: &PhiScale, mu: f64, x: f64) -> Result<f64> {
    Ok(t_psi_mu(phi, mu, x)? * (-x).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiBounds {
    pub c1: f64,
    pub c2: f64,
    /// Slope of `log(tψφ^τ)` against `log φ` on the tail; `C1 > 0` and `C2 < ∞` need it near 0.
    pub tail_slope: f64,
    pub passed: bool,
    pub reason: Option<String>,
}

/// Empirical `(C1, C2)` for `0 < C1 φ^{−τ} ≤ tψ_μ(t) ≤ C2 φ^{−τ}` over the grid.
pub fn check_psi_bounds(phi: &PhiScale, mu: f64, tau: f64, grid: &RadiusGrid) -> Result<PsiBounds> {
    check_psi_bounds_with(phi, mu, tau, grid, 0.05)
}

pub fn check_psi_bounds_with(phi: &PhiScale, mu: f64, tau: f64, grid: &RadiusGrid, slope_tol: f64) -> Result<PsiBounds> {
    let mut vals = Vec::with_capacity(grid.len());
    for &x in grid.log_r() {
        let v = t_psi_mu(phi, mu, x)? * (tau * phi.log_phi(x)).exp();
        vals.push((phi.log_phi(x), v));
    }
    let c1 = vals.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let c2 = vals.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    if !(c1 > 0.0) {
        return Ok(PsiBounds { c1, c2, tail_slope: f64::NAN, passed: false, reason: Some("no positive lower constant".into()) });
    }
    let tail = &vals[vals.len() / 2..];
    let slope = crate::fit::least_squares(tail.iter().map(|&(lp, v)| (lp, v.ln()))).map(|f| f.slope).unwrap_or(0.0);
    let (passed, reason) = if !c2.is_finite() {
        (false, Some("unbounded upper constant".to_string()))
    } else if slope < -slope_tol {
        (false, Some(format!("tψφ^τ decays (tail slope {slope:.3})")))
    } else if slope > slope_tol {
        (false, Some(format!("tψφ^τ grows (tail slope {slope:.3})")))
    } else {
        (true, None)
    };
    Ok(PsiBounds { c1, c2, tail_slope: slope, passed, reason })
}
