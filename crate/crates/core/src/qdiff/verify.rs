//! Checks the growth theorems for q-difference equations on a solved instance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSpec, RadiusGrid};
use crate::models::{FunctionModel, PointKind};
use crate::nevanlinna::{characteristic, counting, max_modulus, order_estimate, OrderEstimate, QuadOptions, Quantity};
use crate::scales::{check_admissibility, growth_params, limit_exists, GrowthCondition, GrowthParams, PhiScale, SScale};

use super::equation::QDifferenceEquation;
use super::solver::{solve_series_with, SeriesSolution, SolveOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub quad: QuadOptions,
    pub params_grid: GridSpec,
    pub epsilon: f64,
    /// Smallest order gap accepted as strict dominance, whatever the fit spreads.
    pub dominance_floor: f64,
    /// `s(r)/r` above this on the parameter tail selects the unbounded branch.
    pub branch_ratio: f64,
    /// Spread allowed for the limit diagnostics.
    pub limit_spread: f64,
    /// Re-solve with doubled truncation and precision on a doubled grid before reporting a failure.
    pub guard: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            quad: QuadOptions::default(),
            params_grid: GridSpec::params_default(),
            epsilon: 0.1,
            dominance_floor: 0.05,
            branch_ratio: 100.0,
            limit_spread: 1e-2,
            guard: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub name: String,
    pub bound_value: f64,
    pub estimate: f64,
    /// Raw signed margin: positive when the inequality holds without slack.
    pub margin: f64,
    pub tolerance: f64,
    pub status: BoundStatus,
    /// The hypothesis that failed, for not-applicable records.
    pub failed_predicate: Option<String>,
    pub note: Option<String>,
}

impl BoundRecord {
    fn not_applicable(name: &str, predicate: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            bound_value: f64::NAN,
            estimate: f64::NAN,
            margin: f64::NAN,
            tolerance: f64::NAN,
            status: BoundStatus::NotApplicable,
            failed_predicate: Some(predicate.into()),
            note: None,
        }
    }

    pub fn failed(&self) -> bool {
        self.status == BoundStatus::Fail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `limsup s(r)/r = ∞`
    Unbounded,
    /// `limsup s(r)/r < ∞`
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilitySummary {
    pub global_ok: bool,
    pub phi_subadditive: bool,
    pub phi_differentiable: bool,
    pub s_convex_differentiable: bool,
    pub young_bounded: Option<bool>,
    pub growth_condition: Option<GrowthCondition>,
    pub branch: Branch,
    /// `max log(s(r)/r)` over the parameter tail.
    pub log_s_ratio_tail_max: f64,
    /// Limits of `log φ(r)/log φ(r²)`, `log log r/log φ(r)` and `rφ′(r)/φ(r)` when they settle.
    pub limits: [Option<f64>; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeiRow {
    pub log_r: f64,
    pub n_f: u64,
    /// `Σ_j n(r, a_j) + n(r, 1/a_0)`.
    pub n_coefficients: u64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeiReport {
    pub rows: Vec<HeiRow>,
    /// Fitted `C = max n(r,f) / ((Σ n(r,a_j) + n(r,1/a_0)) log r)`.
    pub constant: f64,
    pub holds: bool,
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub rho_f_hat: OrderEstimate,
    /// `a_0..a_{n+1}`; `None` for an identically zero right-hand side.
    pub coefficient_orders: Vec<Option<OrderEstimate>>,
    pub dominant_index: Option<usize>,
    pub dominance_gap: f64,
    /// φ-exponent of convergence of the zeros of `a_0`.
    pub lambda_a0: Option<f64>,
    pub params: GrowthParams,
    pub admissibility: AdmissibilitySummary,
    pub epsilon: f64,
    pub bounds: Vec<BoundRecord>,
    pub hei: Option<HeiReport>,
    pub notes: Vec<String>,
}

impl TheoremReport {
    pub fn bound(&self, name: &str) -> Option<&BoundRecord> {
        self.bounds.iter().find(|b| b.name == name)
    }

    pub fn all_pass(&self) -> bool {
        !self.bounds.iter().any(BoundRecord::failed) && self.hei.as_ref().map_or(true, |h| h.holds || h.skipped.is_some())
    }
}

/// `ρ̂` from `log M` for series and from `T` otherwise.
pub fn estimate_order(model: &FunctionModel, phi: &PhiScale, grid: &RadiusGrid, quad: &QuadOptions) -> Result<OrderEstimate> {
    if let FunctionModel::PowerSeries(_) = model {
        let lm = max_modulus(model, grid)?;
        let samples: Vec<(f64, f64)> = lm.into_iter().map(|(x, v)| (x, v.max(0.0))).collect();
        return order_estimate(&samples, phi, Quantity::LogM);
    }
    let chars = characteristic(model, grid, quad)?;
    let samples: Vec<(f64, f64)> = chars.iter().map(|c| (c.log_r, c.t)).collect();
    order_estimate(&samples, phi, Quantity::T)
}

fn is_entire(m: &FunctionModel) -> bool {
    match m {
        FunctionModel::Rational(r) => r.is_polynomial(),
        other => other.is_entire(),
    }
}

fn is_identically_zero(m: &FunctionModel) -> bool {
    match m {
        FunctionModel::Rational(r) => r.is_zero(),
        FunctionModel::PowerSeries(s) => s.coeffs().iter().all(|c| c.real().is_zero() && c.imag().is_zero()),
        _ => false,
    }
}

/// Checks the growth bounds for the solution `f` of `eq`, with the equation's own series solver
/// supplying the doubled-precision rerun when a bound fails.
pub fn verify_theorems(
    eq: &QDifferenceEquation,
    sol: &SeriesSolution,
    phi: &PhiScale,
    s: &SScale,
    grid: &GridSpec,
    opts: &VerifyOptions,
) -> Result<TheoremReport> {
    let first = verify_model(eq, &sol.to_model()?, phi, s, &grid.build()?, &opts.quad, opts)?;
    if !opts.guard || first.all_pass() {
        return Ok(first);
    }
    let solve = SolveOptions { precision: Some(sol.precision * 2), auto_raise: true };
    let again = solve_series_with(eq, sol.truncation * 2, sol.normalization, &solve)?;
    let rerun = verify_model(eq, &again.to_model()?, phi, s, &grid.doubled().build()?, &opts.quad.doubled(), opts)?;
    Ok(merge_guard(first, &rerun))
}

/// As [`verify_theorems`] for a solution given as a model (for instance a planted rational
/// solution). The guard reruns on the doubled grid only.
pub fn verify_solution_model(
    eq: &QDifferenceEquation,
    f: &FunctionModel,
    phi: &PhiScale,
    s: &SScale,
    grid: &GridSpec,
    opts: &VerifyOptions,
) -> Result<TheoremReport> {
    let first = verify_model(eq, f, phi, s, &grid.build()?, &opts.quad, opts)?;
    if !opts.guard || first.all_pass() {
        return Ok(first);
    }
    let rerun = verify_model(eq, f, phi, s, &grid.doubled().build()?, &opts.quad.doubled(), opts)?;
    Ok(merge_guard(first, &rerun))
}

fn merge_guard(mut first: TheoremReport, rerun: &TheoremReport) -> TheoremReport {
    for b in first.bounds.iter_mut().filter(|b| b.failed()) {
        match rerun.bound(&b.name) {
            Some(a) if !a.failed() && a.status != BoundStatus::NotApplicable => {
                let mut a = a.clone();
                a.note = Some(format!(
                    "failed on the base run with margin {:.4}; superseded by the doubled grid and precision rerun",
                    b.margin
                ));
                *b = a;
            }
            Some(a) => b.note = Some(format!("reproduced under doubled grid and precision with margin {:.4}", a.margin)),
            None => {}
        }
    }
    first
}

fn summarize(phi: &PhiScale, s: &SScale, lambda: Option<f64>, params: &GrowthParams, opts: &VerifyOptions) -> Result<AdmissibilitySummary> {
    let pgrid = opts.params_grid.build()?;
    let adm = check_admissibility(phi, s, lambda, &pgrid)?;
    let pf = phi.flags();
    let sf = s.flags();
    let log_s_ratio_tail_max = pgrid.tail().iter().map(|&x| s.log_h(x)).fold(f64::NEG_INFINITY, f64::max);
    let branch = if log_s_ratio_tail_max > opts.branch_ratio.ln() { Branch::Unbounded } else { Branch::Bounded };
    let d = &params.tail_diagnostics;
    let elasticity: Option<Vec<f64>> = d.log_r.iter().map(|&x| phi.elasticity(x)).collect();
    let limits = [
        limit_exists(&d.zeta_ratio, opts.limit_spread),
        limit_exists(&d.beta_ratio, opts.limit_spread),
        elasticity.and_then(|e| limit_exists(&e, opts.limit_spread)),
    ];
    Ok(AdmissibilitySummary {
        global_ok: adm.global_ok(),
        phi_subadditive: pf.claims_subadditive && adm.subadditive.holds,
        phi_differentiable: pf.claims_differentiable && phi.has_derivatives(),
        s_convex_differentiable: sf.claims_convex && sf.claims_differentiable,
        young_bounded: adm.young_bounded.as_ref().map(|c| c.holds),
        growth_condition: adm.growth_condition,
        branch,
        log_s_ratio_tail_max,
        limits,
    })
}

/// φ-exponent of the zeros of `a_0` when it is available from the model.
fn zeros_exponent(a0: &FunctionModel) -> Option<f64> {
    match a0 {
        FunctionModel::Rational(_) => Some(0.0),
        FunctionModel::PowerSeries(s) if s.is_exact() => Some(0.0),
        _ => None,
    }
}

fn verify_model(
    eq: &QDifferenceEquation,
    f: &FunctionModel,
    phi: &PhiScale,
    s: &SScale,
    grid: &RadiusGrid,
    quad: &QuadOptions,
    opts: &VerifyOptions,
) -> Result<TheoremReport> {
    let mut notes = Vec::new();
    let rho_f = estimate_order(f, phi, grid, quad)?;
    let coefficient_orders: Vec<Option<OrderEstimate>> = eq
        .all_models()
        .map(|m| if is_identically_zero(m) { Ok(None) } else { estimate_order(m, phi, grid, quad).map(Some) })
        .collect::<Result<_>>()?;
    for (j, o) in coefficient_orders.iter().enumerate() {
        if let Some(o) = o.as_ref().filter(|o| o.low_confidence) {
            notes.push(format!("order of a_{j} is low-confidence: {}", o.note.clone().unwrap_or_default()));
        }
    }
    if rho_f.low_confidence {
        notes.push(format!("order of f is low-confidence: {}", rho_f.note.clone().unwrap_or_default()));
    }
    let n = eq.order();
    let lambda_a0 = zeros_exponent(&eq.coeffs()[0]);
    let params = growth_params(phi, s, &opts.params_grid.build()?)?;
    let adm = summarize(phi, s, lambda_a0, &params, opts)?;
    let (alpha, beta, gamma) = (params.alpha, params.beta, params.gamma);

    // dominance among a_0..a_n
    let homog: Vec<(usize, &OrderEstimate)> =
        coefficient_orders[..=n].iter().enumerate().filter_map(|(j, o)| o.as_ref().map(|o| (j, o))).collect();
    let mut sorted = homog.clone();
    sorted.sort_by(|a, b| b.1.rho.total_cmp(&a.1.rho));
    let (dominant_index, dominance_gap) = match sorted.as_slice() {
        [] => (None, f64::NAN),
        [(i, _)] => (Some(*i), f64::INFINITY),
        [(i, a), (_, b), ..] => {
            let gap = a.rho - b.rho;
            let need = (3.0 * (a.residual_spread + b.residual_spread)).max(opts.dominance_floor);
            ((gap > need).then_some(*i), gap)
        }
    };
    let finite_orders = coefficient_orders.iter().flatten().all(|o| !o.infinite);
    let tol_with = |o: &OrderEstimate| (3.0 * (rho_f.residual_spread + o.residual_spread)).max(0.1);

    // forcing term: the homogeneous-equation bounds are used only when it is dominated
    let forcing: std::result::Result<Option<String>, String> = match (&coefficient_orders[n + 1], dominant_index) {
        (None, _) => Ok(None),
        (Some(_), None) => Err("non-homogeneous".into()),
        (Some(g), Some(i)) => {
            let a = coefficient_orders[i].as_ref().expect("dominant order");
            let need = (3.0 * (a.residual_spread + g.residual_spread)).max(opts.dominance_floor);
            if a.rho - g.rho > need {
                Ok(Some(format!("evaluated on the homogeneous part; forcing order {:.4} is dominated by {:.4}", g.rho, a.rho)))
            } else {
                Err("non-homogeneous".into())
            }
        }
    };

    let mut bounds = Vec::new();
    let lower = |name: &str, value: f64, tol: f64, note: Option<String>| {
        let margin = rho_f.rho - value;
        BoundRecord {
            name: name.into(),
            bound_value: value,
            estimate: rho_f.rho,
            margin,
            tolerance: tol,
            status: if margin >= -tol { BoundStatus::Pass } else { BoundStatus::Fail },
            failed_predicate: None,
            note,
        }
    };

    // growth of solutions against the dominant coefficient
    let common: std::result::Result<(usize, Option<String>), String> = (|| {
        let i = dominant_index.ok_or_else(|| format!("no strictly dominant coefficient (gap {dominance_gap:.4})"))?;
        if !finite_orders {
            return Err("finite coefficient orders".to_string());
        }
        if !adm.phi_subadditive {
            return Err("φ subadditive".to_string());
        }
        let note = forcing.clone()?;
        Ok((i, note))
    })();
    let names = ["growth_coe_a_meromorphic", "growth_coe_a_entire", "growth_coe_b"];
    match &common {
        Err(p) => bounds.extend(names.iter().map(|n| BoundRecord::not_applicable(n, p.clone()))),
        Ok((i, note)) => {
            let ai = coefficient_orders[*i].as_ref().expect("dominant order");
            let tol = tol_with(ai);
            match adm.branch {
                Branch::Unbounded if adm.s_convex_differentiable => {
                    bounds.push(lower(names[0], alpha * ai.rho, tol, note.clone()));
                    if eq.coeffs().iter().all(is_entire) {
                        bounds.push(lower(names[1], alpha * ai.rho + alpha * gamma, tol, note.clone()));
                    } else {
                        bounds.push(BoundRecord::not_applicable(names[1], "entire coefficients"));
                    }
                    bounds.push(BoundRecord::not_applicable(names[2], "limsup s(r)/r < ∞"));
                }
                Branch::Unbounded => {
                    bounds.push(BoundRecord::not_applicable(names[0], "s convex and differentiable"));
                    bounds.push(BoundRecord::not_applicable(names[1], "s convex and differentiable"));
                    bounds.push(BoundRecord::not_applicable(names[2], "limsup s(r)/r < ∞"));
                }
                Branch::Bounded => {
                    bounds.push(BoundRecord::not_applicable(names[0], "limsup s(r)/r = ∞"));
                    bounds.push(BoundRecord::not_applicable(names[1], "limsup s(r)/r = ∞"));
                    bounds.push(lower(names[2], ai.rho, tol, note.clone()));
                }
            }
        }
    }

    // upper bound from all coefficients
    let rho_all = coefficient_orders.iter().flatten().map(|o| o.rho).fold(0.0, f64::max);
    let spread_all = coefficient_orders.iter().flatten().map(|o| o.residual_spread).fold(0.0, f64::max);
    let upper_tol = (3.0 * (rho_f.residual_spread + spread_all)).max(0.1);
    let upper_pred: std::result::Result<(), String> = (|| {
        if eq.is_unimodular() {
            return Err("|q| ≠ 1".into());
        }
        if !finite_orders {
            return Err("finite coefficient orders".into());
        }
        if eq.all_constant() {
            return Err("a non-constant coefficient".into());
        }
        if !adm.s_convex_differentiable {
            return Err("s convex and differentiable".into());
        }
        if adm.young_bounded != Some(true) {
            return Err("limsup r²s′/s² < ∞".into());
        }
        if !adm.phi_subadditive || !adm.phi_differentiable {
            return Err("φ subadditive and differentiable".into());
        }
        if lambda_a0.is_none() {
            return Err("φ-exponent of the zeros of a_0 available".into());
        }
        match adm.growth_condition {
            Some(GrowthCondition::Below) | Some(GrowthCondition::AtLeast) => {}
            _ => return Err("growth condition on φ′(s)s′r/φ(s) against 1/λ".into()),
        }
        if !(alpha > 0.0) {
            return Err("α > 0".into());
        }
        Ok(())
    })();
    match upper_pred {
        Err(p) => bounds.push(BoundRecord::not_applicable("upper_bound", p)),
        Ok(()) => {
            let value = rho_all / (alpha * alpha) - gamma / alpha + 2.0 * beta;
            let margin = value - rho_f.rho;
            bounds.push(BoundRecord {
                name: "upper_bound".into(),
                bound_value: value,
                estimate: rho_f.rho,
                margin,
                tolerance: upper_tol,
                status: if margin >= -upper_tol { BoundStatus::Pass } else { BoundStatus::Fail },
                failed_predicate: None,
                note: None,
            });
        }
    }

    // constant coefficients: the solution is rational
    if eq.all_constant() && !eq.is_unimodular() {
        let margin = beta - rho_f.rho;
        let tol = (3.0 * rho_f.residual_spread).max(0.1);
        bounds.push(BoundRecord {
            name: "constant_coefficients".into(),
            bound_value: beta,
            estimate: rho_f.rho,
            margin,
            tolerance: tol,
            status: if margin >= -tol { BoundStatus::Pass } else { BoundStatus::Fail },
            failed_predicate: None,
            note: None,
        });
    } else {
        let p = if eq.is_unimodular() { "|q| ≠ 1" } else { "all coefficients constant" };
        bounds.push(BoundRecord::not_applicable("constant_coefficients", p));
    }

    // equality for entire coefficients
    let corollary: std::result::Result<(usize, Option<String>), String> = (|| {
        let (i, note) = common.clone()?;
        if !eq.coeffs().iter().all(is_entire) {
            return Err("entire coefficients".into());
        }
        if !adm.phi_differentiable {
            return Err("φ differentiable".into());
        }
        if let Some(k) = adm.limits.iter().position(Option::is_none) {
            let what = ["log φ(r)/log φ(r²)", "log log r/log φ(r)", "rφ′(r)/φ(r)"][k];
            return Err(format!("limit of {what} exists"));
        }
        if !adm.s_convex_differentiable {
            return Err("s convex and differentiable".into());
        }
        if adm.young_bounded != Some(true) {
            return Err("limsup r²s′/s² < ∞".into());
        }
        Ok((i, note))
    })();
    match corollary {
        Err(p) => bounds.push(BoundRecord::not_applicable("corollary_equality", p)),
        Ok((i, note)) => {
            let ai = coefficient_orders[i].as_ref().expect("dominant order");
            let value = ai.rho + beta;
            let tol = tol_with(ai);
            let margin = -(rho_f.rho - value).abs();
            bounds.push(BoundRecord {
                name: "corollary_equality".into(),
                bound_value: value,
                estimate: rho_f.rho,
                margin,
                tolerance: tol,
                status: if margin >= -tol { BoundStatus::Pass } else { BoundStatus::Fail },
                failed_predicate: None,
                note,
            });
        }
    }

    let hei = if eq.all_models().all(|m| matches!(m, FunctionModel::Rational(_))) { Some(hei_check(eq, f, grid)?) } else { None };

    Ok(TheoremReport {
        rho_f_hat: rho_f,
        coefficient_orders,
        dominant_index,
        dominance_gap,
        lambda_a0,
        params,
        admissibility: adm,
        epsilon: opts.epsilon,
        bounds,
        hei,
        notes,
    })
}

/// `n(r,f) ≤ C (Σ_j n(r,a_j) + n(r,1/a_0)) log r` with the smallest `C` over the grid.
pub fn hei_check(eq: &QDifferenceEquation, f: &FunctionModel, grid: &RadiusGrid) -> Result<HeiReport> {
    let skipped = |why: String| HeiReport { rows: Vec::new(), constant: f64::NAN, holds: false, skipped: Some(why) };
    if !eq.all_models().all(|m| matches!(m, FunctionModel::Rational(_))) {
        return Ok(skipped("coefficients are not rational".into()));
    }
    let mut rows = Vec::new();
    for &x in grid.log_r().iter().filter(|&&x| x > 0.0) {
        let count = |m: &FunctionModel, kind| match counting(m, x, kind) {
            Ok(c) => Ok(Some(c.n)),
            Err(Error::UncertifiedRoots(_)) => Ok(None),
            Err(e) => Err(e),
        };
        let Some(n_f) = count(f, PointKind::Poles)? else {
            return Ok(skipped(format!("poles of the solution are not certified up to log r = {x}")));
        };
        let mut total = 0u64;
        for (j, m) in eq.all_models().enumerate() {
            let Some(c) = count(m, PointKind::Poles)? else {
                return Ok(skipped(format!("poles of a_{j} are not certified")));
            };
            total += c;
        }
        let Some(z0) = count(&eq.coeffs()[0], PointKind::Zeros)? else {
            return Ok(skipped("zeros of a_0 are not certified".into()));
        };
        total += z0;
        let ratio = if n_f == 0 { 0.0 } else { n_f as f64 / (total as f64 * x) };
        rows.push(HeiRow { log_r: x, n_f, n_coefficients: total, ratio });
    }
    if rows.is_empty() {
        return Err(Error::InsufficientGrid("pole counting needs radii with log r > 0".into()));
    }
    let constant = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(HeiReport { rows, constant, holds: constant.is_finite(), skipped: None })
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::models::{Poly, Rational};
    use crate::qdiff::solve_series;

    fn q_theta() -> QDifferenceEquation {
        QDifferenceEquation::new(
            Complex64::new(2.0, 0.0),
            vec![FunctionModel::polynomial(&[0.0, -1.0]), FunctionModel::polynomial(&[1.0])],
            FunctionModel::polynomial(&[1.0]),
        )
        .unwrap()
    }

    fn theta_grid() -> GridSpec {
        GridSpec::LogUniform { log_r_min: 10.0, log_r_max: 400.0, points: 40 }
    }

    #[test]
    fn q_theta_corollary_with_square_scale() {
        let eq = q_theta();
        let sol = solve_series(&eq, 800, None).unwrap();
        let rep = verify_theorems(&eq, &sol, &PhiScale::log(), &SScale::power(2.0).unwrap(), &theta_grid(), &VerifyOptions::default())
            .unwrap();
        assert!((rep.rho_f_hat.rho - 2.0).abs() < 0.15, "{}", rep.rho_f_hat.rho);
        let c = rep.bound("corollary_equality").unwrap();
        assert_eq!(c.status, BoundStatus::Pass, "{c:?}");
        assert!((c.bound_value - 2.0).abs() < 0.05);
        assert_eq!(rep.bound("growth_coe_a_entire").unwrap().status, BoundStatus::Pass);
        assert_eq!(rep.bound("upper_bound").unwrap().status, BoundStatus::Pass, "{:?}", rep.bound("upper_bound"));
        assert!(rep.all_pass());
    }

    #[test]
    fn q_theta_bounded_branch_margin() {
        let eq = q_theta();
        let sol = solve_series(&eq, 800, None).unwrap();
        let rep = verify_theorems(&eq, &sol, &PhiScale::log(), &SScale::linear(2.0).unwrap(), &theta_grid(), &VerifyOptions::default())
            .unwrap();
        let b = rep.bound("growth_coe_b").unwrap();
        assert_eq!(b.status, BoundStatus::Pass);
        assert!((b.margin - 1.0).abs() < 0.15, "{b:?}");
        assert_eq!(rep.admissibility.branch, Branch::Bounded);
    }

    #[test]
    fn constant_coefficients_give_rational_solution() {
        let eq = QDifferenceEquation::new(
            Complex64::new(2.0, 0.0),
            vec![FunctionModel::polynomial(&[1.0]), FunctionModel::polynomial(&[-1.0])],
            FunctionModel::polynomial(&[]),
        )
        .unwrap();
        let sol = solve_series(&eq, 40, Some(Complex64::new(1.0, 0.0))).unwrap();
        let rep = verify_theorems(&eq, &sol, &PhiScale::log(), &SScale::linear(2.0).unwrap(), &theta_grid(), &VerifyOptions::default())
            .unwrap();
        let c = rep.bound("constant_coefficients").unwrap();
        assert_eq!(c.status, BoundStatus::Pass, "{c:?}");
        assert_eq!(rep.bound("upper_bound").unwrap().failed_predicate.as_deref(), Some("a non-constant coefficient"));
    }

    #[test]
    fn hei_with_planted_rational_solution() {
        // f = 1/(z − 1), a_0 = 1, a_1 = −1, q = 2, RHS = f(z) − f(2z)
        let q = 2.0;
        let f = FunctionModel::rational(&[1.0], &[-1.0, 1.0]).unwrap();
        let rhs = {
            // 1/(z−1) − 1/(2z−1) = z / ((z−1)(2z−1))
            let num = Poly::from_real(&[0.0, 1.0]);
            let den = Poly::from_real(&[-1.0, 1.0]).mul(&Poly::from_real(&[-1.0, q]));
            FunctionModel::Rational(Rational::new(num, den).unwrap())
        };
        let eq = QDifferenceEquation::new(Complex64::new(q, 0.0), vec![FunctionModel::polynomial(&[1.0]), FunctionModel::polynomial(&[-1.0])], rhs)
            .unwrap();
        let grid = GridSpec::LogUniform { log_r_min: 0.1, log_r_max: 5.0, points: 30 }.build().unwrap();
        let h = hei_check(&eq, &f, &grid).unwrap();
        assert!(h.holds && h.skipped.is_none());
        assert!(h.constant > 0.0 && h.constant.is_finite());
        assert!(h.rows.iter().all(|r| r.n_f <= 1 && (r.log_r <= 0.0 || r.n_coefficients >= 2)));
    }

    #[test]
    fn hei_entire_and_polynomial_solutions() {
        let eq = q_theta();
        let grid = GridSpec::LogUniform { log_r_min: 1.0, log_r_max: 5.0, points: 10 }.build().unwrap();
        let h = hei_check(&eq, &FunctionModel::polynomial(&[1.0, 2.0]), &grid).unwrap();
        assert!(h.holds);
        assert_eq!(h.constant, 0.0);
        assert!(h.rows.iter().all(|r| r.n_f == 0));
    }
}
