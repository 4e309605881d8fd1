//! Executes the runs of an [`ExperimentConfig`] and writes one artifact per run.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bigfloat::{solver_precision, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::models::{DecimalCoeff, FunctionModel, ZeroSequence};
use crate::nevanlinna::{
    lemma_a_check, order_estimate, phi_exponent, product_min_modulus_check, quantity_samples,
    relation_checks, MinModOptions, MuScan, QuadOptions, Quantity, RelationOptions,
};
use crate::qdiff::{
    ladder_check, ladder_for_equation, residual, solve_series_with, verify_theorems, LadderOptions, QDifferenceEquation,
    SeriesSolution, SolveOptions, VerifyOptions,
};
use crate::scales::{auxiliary_uvw, check_admissibility, check_psi_bounds, check_uvw, growth_params, PhiScale, SScale};

use super::config::{ExperimentConfig, Op, RunSpec};
use super::io::{cell, opt_cell, write_atomic, write_json, Table};

#[derive(Clone, Debug, PartialEq)]
pub struct RunnerOptions {
    pub out_dir: PathBuf,
    /// Directory that relative input paths (CSV tables, zero lists) are resolved against.
    pub base_dir: PathBuf,
    /// Run names to execute; empty means all.
    pub only: Vec<String>,
    pub precision_bits: Option<u32>,
    pub parallel: bool,
}

impl Default for RunnerOptions {
    fn default() -> Self {
        Self { out_dir: "out".into(), base_dir: ".".into(), only: Vec::new(), precision_bits: None, parallel: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    /// Completed; the op asserts nothing.
    Ok,
    Pass,
    Fail,
    ExpectedFail,
    UnexpectedPass,
    Error,
}

impl RunStatus {
    pub fn is_success(self) -> bool {
        matches!(self, RunStatus::Ok | RunStatus::Pass | RunStatus::ExpectedFail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub name: String,
    pub op: Op,
    pub status: RunStatus,
    pub summary: String,
    pub output: Option<PathBuf>,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub runs: Vec<RunOutcome>,
}

impl RunReport {
    /// `0` when every run succeeded, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.runs.iter().all(|r| r.status.is_success()) {
            0
        } else {
            1
        }
    }
}

/// Validates the configuration, then executes the selected runs. A failing run is recorded
/// in the report and does not stop the others; only configuration errors return `Err`.
pub fn run_config(cfg: &ExperimentConfig, opts: &RunnerOptions) -> Result<RunReport> {
    cfg.validate()?;
    for n in &opts.only {
        if !cfg.runs.iter().any(|r| &r.name == n) {
            return Err(Error::config("--only", format!("no run named '{n}'")));
        }
    }
    let selected: Vec<(usize, &RunSpec)> =
        cfg.runs.iter().enumerate().filter(|(_, r)| opts.only.is_empty() || opts.only.contains(&r.name)).collect();
    let exec = |&(i, r): &(usize, &RunSpec)| run_one(&Ctx { cfg, index: i, run: r, opts });
    let runs = if opts.parallel { selected.par_iter().map(exec).collect() } else { selected.iter().map(exec).collect() };
    Ok(RunReport { runs })
}

fn run_one(ctx: &Ctx<'_>) -> RunOutcome {
    let start = Instant::now();
    let run = ctx.run;
    let (status, summary, output) = match execute(ctx).and_then(|e| ctx.write(&e).map(|p| (e, p))) {
        Ok((e, path)) => {
            let status = match (e.passed, run.expect_fail) {
                (None, _) => RunStatus::Ok,
                (Some(true), false) => RunStatus::Pass,
                (Some(false), false) => RunStatus::Fail,
                (Some(false), true) => RunStatus::ExpectedFail,
                (Some(true), true) => RunStatus::UnexpectedPass,
            };
            (status, e.summary, Some(path))
        }
        Err(e) => (RunStatus::Error, e.to_string(), None),
    };
    RunOutcome { name: run.name.clone(), op: run.op, status, summary, output, wall_time_s: start.elapsed().as_secs_f64() }
}

struct Executed {
    passed: Option<bool>,
    summary: String,
    json: serde_json::Value,
    table: Table,
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    index: usize,
    run: &'a RunSpec,
    opts: &'a RunnerOptions,
}

impl Ctx<'_> {
    fn missing(&self, field: &str) -> Error {
        Error::config(format!("runs[{}].{field}", self.index), format!("op {} needs `{field}`", self.run.op.name()))
    }

    fn need<T: Copy>(&self, field: &str, v: Option<T>) -> Result<T> {
        v.ok_or_else(|| self.missing(field))
    }

    fn base(&self) -> &Path {
        &self.opts.base_dir
    }

    fn phi(&self) -> Result<PhiScale> {
        let n = self.run.phi.as_deref().ok_or_else(|| self.missing("phi"))?;
        self.cfg.resolve_phi(n, self.base())
    }

    fn s(&self) -> Result<SScale> {
        let n = self.run.s.as_deref().ok_or_else(|| self.missing("s"))?;
        self.cfg.resolve_s(n)
    }

    fn model(&self) -> Result<FunctionModel> {
        let n = self.run.model.as_deref().ok_or_else(|| self.missing("model"))?;
        self.cfg.resolve_model(n, self.base())
    }

    fn grid(&self) -> Result<GridSpec> {
        self.run.grid.clone().or_else(|| self.cfg.defaults.grid.clone()).ok_or_else(|| self.missing("grid"))
    }

    fn grid_or(&self, fallback: GridSpec) -> GridSpec {
        self.run.grid.clone().or_else(|| self.cfg.defaults.grid.clone()).unwrap_or(fallback)
    }

    fn solve(&self) -> Result<(QDifferenceEquation, SeriesSolution)> {
        let n = self.run.equation.as_deref().ok_or_else(|| self.missing("equation"))?;
        let (eq, spec) = self.cfg.resolve_equation(n, self.base())?;
        let base = self.opts.precision_bits.or(self.cfg.defaults.precision_bits).unwrap_or(DEFAULT_PRECISION);
        let opts = SolveOptions { precision: Some(solver_precision(spec.truncation, eq.q().norm(), base)), auto_raise: true };
        let c0 = spec.normalization.map(|c| Complex64::new(c[0], c[1]));
        let sol = solve_series_with(&eq, spec.truncation, c0, &opts)?;
        Ok((eq, sol))
    }

    fn write(&self, e: &Executed) -> Result<PathBuf> {
        let path = self.opts.out_dir.join(&self.run.output);
        match path.extension().and_then(|x| x.to_str()) {
            Some("csv") => write_atomic(&path, &e.table.to_csv()?)?,
            Some("json") => write_json(
                &path,
                &json!({
                    "name": self.run.name,
                    "op": self.run.op,
                    "passed": e.passed,
                    "summary": e.summary,
                    "result": e.json,
                }),
            )?,
            _ => {
                return Err(Error::config(format!("runs[{}].output", self.index), "output must end in .json or .csv"));
            }
        }
        Ok(path)
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))
}

/// Fields each op cannot run without, besides a grid.
pub(crate) fn required_fields(op: Op) -> &'static [&'static str] {
    match op {
        Op::Params | Op::Admissible => &["phi", "s"],
        Op::Order | Op::Exponent => &["model", "phi"],
        Op::ProductCheck => &["model", "phi", "s", "lambda"],
        Op::Solve | Op::Residual => &["equation"],
        Op::Verify => &["equation", "phi", "s"],
        Op::Ladder => &["equation", "phi"],
        Op::LemmaA => &["model", "r", "big_r", "q"],
        Op::Relations => &["model", "phi", "s"],
        Op::Uvw => &["s"],
        Op::Psi => &["phi", "mu", "tau"],
    }
}

/// Ops that need a grid from the run or the defaults.
pub(crate) fn needs_grid(op: Op) -> bool {
    matches!(op, Op::Order | Op::Exponent | Op::ProductCheck | Op::Verify | Op::Relations | Op::Psi)
}

fn zeros_of(model: &FunctionModel) -> Result<&ZeroSequence> {
    match model {
        FunctionModel::CanonicalProduct(p) => Ok(p.zeros()),
        FunctionModel::Quotient(q) => Ok(q.numer.zeros()),
        other => Err(Error::UnsupportedVariant(format!("zero sequence of a {} model", other.variant_name()))),
    }
}

fn execute(ctx: &Ctx<'_>) -> Result<Executed> {
    let run = ctx.run;
    match run.op {
        Op::Params => {
            let g = growth_params(&ctx.phi()?, &ctx.s()?, &ctx.grid_or(GridSpec::params_default()).build()?)?;
            let mut t = Table::new(&["alpha", "beta", "gamma", "zeta", "kappa"]);
            t.push(vec![cell(g.alpha), cell(g.beta), cell(g.gamma), opt_cell(g.zeta), opt_cell(g.kappa)]);
            let summary = format!("α = {:.4}, β = {:.4}, γ = {:.4}", g.alpha, g.beta, g.gamma);
            Ok(Executed { passed: None, summary, json: to_json(&g)?, table: t })
        }
        Op::Admissible => {
            let grid = ctx.grid_or(GridSpec::params_default()).build()?;
            let rep = check_admissibility(&ctx.phi()?, &ctx.s()?, run.lambda, &grid)?;
            let mut t = Table::new(&["check", "holds", "witness_log_r", "tail_max"]);
            let checks = [
                ("phi_restriction", Some(&rep.phi_restriction)),
                ("s_range", Some(&rep.s_range)),
                ("s_ratio_liminf", Some(&rep.s_ratio_liminf)),
                ("subadditive", Some(&rep.subadditive)),
                ("s_doubling", Some(&rep.s_doubling)),
                ("young_bounded", rep.young_bounded.as_ref()),
                ("young_elasticity", rep.young_elasticity.as_ref()),
                ("young_dilation", Some(&rep.young_dilation)),
            ];
            for (name, c) in checks {
                if let Some(c) = c {
                    t.push(vec![name.into(), c.holds.to_string(), opt_cell(c.witness_log_r), opt_cell(c.tail_max)]);
                }
            }
            let ok = rep.global_ok();
            Ok(Executed { passed: Some(ok), summary: format!("global assumptions hold: {ok}"), json: to_json(&rep)?, table: t })
        }
        Op::Order => {
            let m = ctx.model()?;
            let phi = ctx.phi()?;
            let grid = ctx.grid()?.build()?;
            let quantity = run.quantity.unwrap_or(Quantity::T);
            let samples = quantity_samples(&m, &grid, quantity, &QuadOptions::default())?;
            let est = order_estimate(&samples, &phi, quantity)?;
            let mut t = Table::new(&["log_r", "value"]);
            for &(x, v) in &samples {
                t.push(vec![cell(x), cell(v)]);
            }
            let summary = if est.infinite { "infinite order".into() } else { format!("ρ = {:.4} ± {:.4}", est.rho, est.tolerance()) };
            Ok(Executed { passed: None, summary, json: json!({ "estimate": to_json(&est)?, "samples": samples }), table: t })
        }
        Op::Exponent => {
            let m = ctx.model()?;
            let scan = MuScan { step: run.mu.unwrap_or(MuScan::default().step), ..MuScan::default() };
            let rep = phi_exponent(zeros_of(&m)?, &ctx.phi()?, &ctx.grid()?.build()?, &scan)?;
            let mut t = Table::new(&["mu", "verdict"]);
            for (mu, v) in &rep.sum_dichotomy.mu_scan {
                t.push(vec![cell(*mu), format!("{v:?}").to_lowercase()]);
            }
            let summary = format!("λ = {:.4} (order of n), {:.4} (sum dichotomy)", rep.order_of_n.lambda, rep.sum_dichotomy.lambda);
            Ok(Executed { passed: Some(rep.agree), summary, json: to_json(&rep)?, table: t })
        }
        Op::ProductCheck => {
            let product = match ctx.model()? {
                FunctionModel::CanonicalProduct(p) => p,
                other => return Err(Error::UnsupportedVariant(format!("minimum modulus of a {} model", other.variant_name()))),
            };
            let opts = MinModOptions { epsilon: run.epsilon.unwrap_or(MinModOptions::default().epsilon), ..Default::default() };
            let lambda = ctx.need("lambda", run.lambda)?;
            let rep = product_min_modulus_check(&product, &ctx.phi()?, &ctx.s()?, lambda, &ctx.grid()?.build()?, &opts)?;
            let mut t = Table::new(&["log_r", "sup_ratio", "admissible", "excluded"]);
            for r in &rep.rows {
                t.push(vec![cell(r.log_r), cell(r.sup_ratio), r.admissible.to_string(), r.excluded.to_string()]);
            }
            let summary = format!("constant {:.4e}, tail slope {:.4}", rep.constant, rep.tail_slope);
            Ok(Executed { passed: Some(rep.bounded), summary, json: to_json(&rep)?, table: t })
        }
        Op::Solve => {
            let (_, sol) = ctx.solve()?;
            let rows = sol.to_decimal_rows()?;
            let summary = format!(
                "K = {}, {} bits{}{}",
                sol.truncation,
                sol.precision,
                if sol.exact { ", exact" } else { "" },
                if sol.resonance_indices.is_empty() { String::new() } else { format!(", resonances {:?}", sol.resonance_indices) }
            );
            let json = json!({
                "q": [sol.q.re, sol.q.im],
                "truncation": sol.truncation,
                "precision": sol.precision,
                "exact": sol.exact,
                "resonance_indices": sol.resonance_indices,
                "normalization": sol.normalization.map(|c| [c.re, c.im]),
                "warnings": sol.warnings,
                "coefficients": rows,
            });
            Ok(Executed { passed: None, summary, json, table: decimal_table(&rows) })
        }
        Op::Residual => {
            let (eq, sol) = ctx.solve()?;
            let grid = match run.r {
                Some(r) => GridSpec::Explicit { log_r: vec![r.ln()] },
                None => ctx.grid()?,
            };
            let rep = residual(&eq, &sol, &grid.build()?, run.thetas.unwrap_or(64))?;
            let mut t = Table::new(&["log_r", "max_log_residual", "log_scale"]);
            for r in &rep.rows {
                t.push(vec![cell(r.log_r), cell(r.max_log_residual), cell(r.log_scale)]);
            }
            let passed = run.tolerance.map(|tol| rep.max_log_residual <= tol.ln());
            let summary = format!("max |residual| = 10^{:.1}", rep.max_log_residual / std::f64::consts::LN_10);
            Ok(Executed { passed, summary, json: to_json(&rep)?, table: t })
        }
        Op::Verify => {
            let (eq, sol) = ctx.solve()?;
            let opts = VerifyOptions { epsilon: run.epsilon.unwrap_or(VerifyOptions::default().epsilon), ..Default::default() };
            let rep = verify_theorems(&eq, &sol, &ctx.phi()?, &ctx.s()?, &ctx.grid()?, &opts)?;
            let mut t = Table::new(&["bound", "status", "bound_value", "estimate", "margin", "tolerance", "failed_predicate"]);
            for b in &rep.bounds {
                t.push(vec![
                    b.name.clone(),
                    to_json(&b.status)?.as_str().unwrap_or_default().to_string(),
                    cell(b.bound_value),
                    cell(b.estimate),
                    cell(b.margin),
                    cell(b.tolerance),
                    b.failed_predicate.clone().unwrap_or_default(),
                ]);
            }
            let summary = format!("ρ̂ = {:.4}; {} bounds", rep.rho_f_hat.rho, rep.bounds.len());
            Ok(Executed { passed: Some(rep.all_pass()), summary, json: to_json(&rep)?, table: t })
        }
        Op::Ladder => {
            let (eq, sol) = ctx.solve()?;
            let f = sol.to_model()?;
            let lopts = LadderOptions { rungs: run.rungs.unwrap_or(LadderOptions::default().rungs), ..Default::default() };
            let ladder = ladder_for_equation(&eq, Some(&f), run.t0.unwrap_or(1.0), &lopts)?;
            let rep = ladder_check(&f, &ctx.phi()?, &ladder, run.j0.unwrap_or(0.0), run.epsilon.unwrap_or(0.1), 0.1)?;
            let mut t = Table::new(&["k", "log_r", "log_mk", "ratio"]);
            for r in &rep.rows {
                t.push(vec![r.k.to_string(), cell(r.log_r), cell(r.log_mk), cell(r.ratio)]);
            }
            let summary = format!("t = {}, constant {:.4e}, tail slope {:.4}", ladder.t, rep.constant, rep.tail_slope);
            Ok(Executed { passed: Some(rep.bounded), summary, json: json!({ "ladder": ladder, "report": rep }), table: t })
        }
        Op::LemmaA => {
            let q = ctx.need("q", run.q)?;
            let cmp = lemma_a_check(
                &ctx.model()?,
                ctx.need("r", run.r)?,
                ctx.need("big_r", run.big_r)?,
                Complex64::new(q[0], q[1]),
                run.delta.unwrap_or(0.5),
                &QuadOptions::default(),
            )?;
            let mut t = Table::new(&["r", "lambda", "lhs", "lhs_error", "bound", "margin"]);
            t.push(vec![cell(cmp.inputs.r), cell(cmp.inputs.lambda), cell(cmp.lhs), cell(cmp.lhs_error), cell(cmp.bound.total), cell(cmp.margin)]);
            let summary = format!("m = {:.4e} ≤ {:.4e}", cmp.lhs, cmp.bound.total);
            Ok(Executed { passed: Some(cmp.margin >= 0.0), summary, json: to_json(&cmp)?, table: t })
        }
        Op::Relations => {
            let opts = RelationOptions { epsilon: run.epsilon.unwrap_or(RelationOptions::default().epsilon), ..Default::default() };
            let rep = relation_checks(&ctx.model()?, &ctx.phi()?, &ctx.s()?, &ctx.grid()?, &opts)?;
            let mut t = Table::new(&["check", "status", "lhs", "rhs", "tolerance", "margin"]);
            for c in &rep.checks {
                let status = to_json(&c.status)?.as_str().unwrap_or_default().to_string();
                t.push(vec![c.name.clone(), status, cell(c.lhs), cell(c.rhs), cell(c.tolerance), cell(c.margin)]);
            }
            let failed = rep.checks.iter().filter(|c| c.failed()).count();
            let summary = format!("{} checks, {failed} failed", rep.checks.len());
            Ok(Executed { passed: Some(rep.all_pass()), summary, json: to_json(&rep)?, table: t })
        }
        Op::Uvw => {
            let s = ctx.s()?;
            let triple = auxiliary_uvw(&s, run.r.unwrap_or(2.0), run.big_r.unwrap_or(1e4))?;
            let chk = check_uvw(&triple, &s, run.samples.unwrap_or(1000), ctx.cfg.defaults.seed);
            let mut t = Table::new(&["property", "passed", "samples"]);
            for (k, p) in chk.passed.iter().enumerate() {
                t.push(vec![(k + 1).to_string(), p.to_string(), chk.samples.to_string()]);
            }
            let summary = format!("passed {:?} of {}", chk.passed, chk.samples);
            Ok(Executed { passed: Some(chk.all_hold()), summary, json: to_json(&chk)?, table: t })
        }
        Op::Psi => {
            let b = check_psi_bounds(&ctx.phi()?, ctx.need("mu", run.mu)?, ctx.need("tau", run.tau)?, &ctx.grid()?.build()?)?;
            let mut t = Table::new(&["c1", "c2", "tail_slope", "passed"]);
            t.push(vec![cell(b.c1), cell(b.c2), cell(b.tail_slope), b.passed.to_string()]);
            let summary = format!("C1 = {:.4e}, C2 = {:.4e}", b.c1, b.c2);
            Ok(Executed { passed: Some(b.passed), summary, json: to_json(&b)?, table: t })
        }
    }
}

fn decimal_table(rows: &[DecimalCoeff]) -> Table {
    let mut t = Table::new(&["index", "mantissa", "exponent", "error_bound", "im_mantissa", "im_exponent"]);
    for r in rows {
        t.push(vec![
            r.index.to_string(),
            r.mantissa.clone(),
            r.exponent.to_string(),
            opt_cell(r.error_bound),
            r.im_mantissa.clone().unwrap_or_default(),
            r.im_exponent.map(|e| e.to_string()).unwrap_or_default(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    const CFG: &str = r#"
[s.two]
kind = "linear"
c = 2.0

[models.a0]
kind = "polynomial"
coeffs = [0.0, -1.0]

[models.one]
kind = "polynomial"
coeffs = [1.0]

[equations.theta]
q = [2.0, 0.0]
coeffs = ["a0", "one"]
rhs = "one"
truncation = 200

[models.minus_one]
kind = "polynomial"
coeffs = [-1.0]

[equations.bad]
q = [2.0, 0.0]
coeffs = ["one", "minus_one"]
rhs = "one"
truncation = 10

[[runs]]
name = "coeffs"
op = "solve"
equation = "theta"
output = "theta.csv"

[[runs]]
name = "res"
op = "residual"
equation = "theta"
r = 1.0
tolerance = 1e-40
output = "res.json"

[[runs]]
name = "broken"
op = "solve"
equation = "bad"
output = "bad.json"

[[runs]]
name = "uvw"
op = "uvw"
s = "two"
output = "uvw.json"

[[runs]]
name = "far"
op = "residual"
equation = "theta"
r = 1.0
tolerance = 1e-300
expect_fail = true
output = "far.csv"
"#;

    #[test]
    fn batch_survives_a_failing_run() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::from_toml(CFG).unwrap();
        let opts = RunnerOptions { out_dir: dir.path().into(), ..Default::default() };
        let rep = run_config(&cfg, &opts).unwrap();
        let status: Vec<_> = rep.runs.iter().map(|r| r.status).collect();
        assert_eq!(status[0], RunStatus::Ok);
        assert_eq!(status[1], RunStatus::Pass);
        // f(z) − f(2z) = 1 has no solution at k = 0
        assert_eq!(status[2], RunStatus::Error);
        assert!(rep.runs[2].summary.contains("k = 0"), "{}", rep.runs[2].summary);
        // s = 2r keeps s(r)/r bounded, so the construction does not apply
        assert_eq!(status[3], RunStatus::Error);
        assert_eq!(status[4], RunStatus::ExpectedFail);
        assert_eq!(rep.exit_code(), 1);
        let csv = std::fs::read_to_string(dir.path().join("theta.csv")).unwrap();
        assert!(csv.starts_with("index,mantissa,exponent"));
        assert_eq!(csv.lines().count(), 202);
    }

    #[test]
    fn only_selects_and_unknown_names_are_config_errors() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::from_toml(CFG).unwrap();
        let opts = RunnerOptions { out_dir: dir.path().into(), only: vec!["res".into()], ..Default::default() };
        let rep = run_config(&cfg, &opts).unwrap();
        assert_eq!(rep.runs.len(), 1);
        assert_eq!(rep.exit_code(), 0);
        let opts = RunnerOptions { only: vec!["nope".into()], ..opts };
        assert!(matches!(run_config(&cfg, &opts), Err(Error::Config { .. })));
    }

    #[test]
    fn identical_configs_give_identical_bytes() {
        let cfg = ExperimentConfig::from_toml(CFG).unwrap();
        let read = |parallel| {
            let dir = tempfile::tempdir().unwrap();
            let opts = RunnerOptions { out_dir: dir.path().into(), parallel, ..Default::default() };
            run_config(&cfg, &opts).unwrap();
            ["theta.csv", "res.json"].map(|f| std::fs::read(dir.path().join(f)).unwrap())
        };
        assert_eq!(read(false), read(true));
    }
}
