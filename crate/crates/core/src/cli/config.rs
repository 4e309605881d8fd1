//! Declarative experiment configuration (TOML).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::models::{CanonicalProduct, FunctionModel, PowerSeries, Quotient, ZeroSequence};
use crate::nevanlinna::Quantity;
use crate::qdiff::QDifferenceEquation;
use crate::scales::{BuiltinPhi, PhiScale, SScale};

use super::io;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub defaults: Defaults,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub phi: BTreeMap<String, PhiSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub s: BTreeMap<String, SSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub models: BTreeMap<String, ModelSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub equations: BTreeMap<String, EquationSpec>,
    #[serde(default)]
    pub runs: Vec<RunSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    Log,
    Identity,
    LogPower { alpha: f64 },
    ExpLogPower { beta: f64 },
    Power { beta: f64 },
    /// CSV with columns `r, phi_r[, dphi, d2phi]`.
    Table { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SSpec {
    Linear { c: f64 },
    Power { eta: f64 },
    RLogR,
    Exp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Identity,
    /// Real coefficients, lowest degree first.
    Polynomial { coeffs: Vec<f64> },
    Rational { numer: Vec<f64>, denom: Vec<f64> },
    ExampleF { phi: String, kappa: f64 },
    ExampleG { phi: String, c: f64 },
    /// Canonical product over zeros read from CSV (`log_modulus, argument, multiplicity`).
    Product { zeros: PathBuf },
    /// `constant · z^power · numer / denom`, both named product models.
    Quotient {
        #[serde(default = "unit")]
        constant: [f64; 2],
        #[serde(default)]
        power: i64,
        numer: String,
        denom: String,
    },
    /// Coefficients `(index, mantissa, exponent[, error_bound, im_mantissa, im_exponent])` from CSV.
    Series {
        path: PathBuf,
        #[serde(default = "default_bits")]
        precision: u32,
        #[serde(default)]
        exact: bool,
    },
}

fn unit() -> [f64; 2] {
    [1.0, 0.0]
}

fn default_bits() -> u32 {
    crate::bigfloat::DEFAULT_PRECISION
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationSpec {
    pub q: [f64; 2],
    /// Model names for `a_0..a_n`.
    pub coeffs: Vec<String>,
    /// Model name for `a_{n+1}`; omitted means homogeneous.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    pub truncation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<[f64; 2]>,
    #[serde(default)]
    pub clear_denominators: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    Params,
    Admissible,
    Order,
    Exponent,
    ProductCheck,
    Solve,
    Residual,
    Verify,
    Ladder,
    LemmaA,
    Relations,
    Uvw,
    Psi,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Params => "params",
            Op::Admissible => "admissible",
            Op::Order => "order",
            Op::Exponent => "exponent",
            Op::ProductCheck => "product-check",
            Op::Solve => "solve",
            Op::Residual => "residual",
            Op::Verify => "verify",
            Op::Ladder => "ladder",
            Op::LemmaA => "lemma-a",
            Op::Relations => "relations",
            Op::Uvw => "uvw",
            Op::Psi => "psi",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub name: String,
    pub op: Op,
    /// Artifact path (relative to the output directory); the extension picks JSON or CSV.
    pub output: PathBuf,
    /// The run is an assertion expected to fail; it does not affect the exit code.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expect_fail: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantity: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Radius `r` (not its logarithm) for single-radius operations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// Outer radius for the q-difference bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thetas: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rungs: Option<usize>,
    /// Order exponent `J0` for the ladder growth check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j0: Option<f64>,
    /// Absolute residual allowed by a `residual` run; without it the run only records.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl RunSpec {
    pub fn new(name: &str, op: Op, output: &str) -> Self {
        Self {
            name: name.into(),
            op,
            output: output.into(),
            expect_fail: false,
            phi: None,
            s: None,
            model: None,
            equation: None,
            grid: None,
            quantity: None,
            lambda: None,
            epsilon: None,
            mu: None,
            tau: None,
            r: None,
            big_r: None,
            q: None,
            delta: None,
            thetas: None,
            samples: None,
            t0: None,
            rungs: None,
            j0: None,
            tolerance: None,
        }
    }
}

impl RunSpec {
    fn has_field(&self, f: &str) -> bool {
        match f {
            "phi" => self.phi.is_some(),
            "s" => self.s.is_some(),
            "model" => self.model.is_some(),
            "equation" => self.equation.is_some(),
            "lambda" => self.lambda.is_some(),
            "r" => self.r.is_some(),
            "big_r" => self.big_r.is_some(),
            "q" => self.q.is_some(),
            "mu" => self.mu.is_some(),
            "tau" => self.tau.is_some(),
            _ => false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("<toml>", e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config("<toml>", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::config(path.display().to_string(), e.to_string()))
    }

    /// Every name referenced by a run, model or equation resolves.
    pub fn validate(&self) -> Result<()> {
        let mut names = std::collections::BTreeSet::new();
        for (i, r) in self.runs.iter().enumerate() {
            if !names.insert(&r.name) {
                return Err(Error::config(format!("runs[{i}].name"), format!("duplicate run name '{}'", r.name)));
            }
            if !matches!(r.output.extension().and_then(|x| x.to_str()), Some("csv" | "json")) {
                return Err(Error::config(format!("runs[{i}].output"), "output must be a path ending in .json or .csv"));
            }
            let check = |what: &str, v: &Option<String>, ok: &dyn Fn(&str) -> bool| -> Result<()> {
                match v {
                    Some(n) if !ok(n) => Err(Error::config(format!("runs[{i}].{what}"), format!("unknown {what} '{n}'"))),
                    _ => Ok(()),
                }
            };
            check("phi", &r.phi, &|n| self.has_phi(n))?;
            check("s", &r.s, &|n| self.s.contains_key(n))?;
            check("model", &r.model, &|n| self.models.contains_key(n))?;
            check("equation", &r.equation, &|n| self.equations.contains_key(n))?;
            for f in super::runner::required_fields(r.op) {
                if !r.has_field(f) {
                    return Err(Error::config(format!("runs[{i}].{f}"), format!("op {} needs `{f}`", r.op.name())));
                }
            }
            let grid_given = r.grid.is_some() || self.defaults.grid.is_some();
            if !grid_given && (super::runner::needs_grid(r.op) || (r.op == Op::Residual && r.r.is_none())) {
                return Err(Error::config(format!("runs[{i}].grid"), format!("op {} needs a grid", r.op.name())));
            }
        }
        for (name, m) in &self.models {
            let path = format!("models.{name}");
            match m {
                ModelSpec::ExampleF { phi, .. } | ModelSpec::ExampleG { phi, .. } if !self.has_phi(phi) => {
                    return Err(Error::config(format!("{path}.phi"), format!("unknown phi '{phi}'")));
                }
                ModelSpec::Quotient { numer, denom, .. } => {
                    for (field, n) in [("numer", numer), ("denom", denom)] {
                        if !self.models.contains_key(n) {
                            return Err(Error::config(format!("{path}.{field}"), format!("unknown model '{n}'")));
                        }
                    }
                }
                _ => {}
            }
        }
        for (name, e) in &self.equations {
            for (j, c) in e.coeffs.iter().chain(e.rhs.iter()).enumerate() {
                if !self.models.contains_key(c) {
                    return Err(Error::config(format!("equations.{name}.coeffs[{j}]"), format!("unknown model '{c}'")));
                }
            }
        }
        Ok(())
    }

    fn has_phi(&self, n: &str) -> bool {
        self.phi.contains_key(n) || matches!(n, "log" | "identity")
    }

    pub fn resolve_phi(&self, name: &str, base: &Path) -> Result<PhiScale> {
        let spec = match self.phi.get(name) {
            Some(s) => s.clone(),
            None if name == "log" => PhiSpec::Log,
            None if name == "identity" => PhiSpec::Identity,
            None => return Err(Error::config(format!("phi.{name}"), "not declared")),
        };
        match spec {
            PhiSpec::Log => Ok(PhiScale::log()),
            PhiSpec::Identity => Ok(PhiScale::identity()),
            PhiSpec::LogPower { alpha } => PhiScale::builtin(BuiltinPhi::LogPower, alpha),
            PhiSpec::ExpLogPower { beta } => PhiScale::builtin(BuiltinPhi::ExpLogPower, beta),
            PhiSpec::Power { beta } => PhiScale::builtin(BuiltinPhi::Power, beta),
            PhiSpec::Table { path } => PhiScale::from_table(&io::read_csv_rows(&base.join(path))?),
        }
    }

    pub fn resolve_s(&self, name: &str) -> Result<SScale> {
        match self.s.get(name) {
            Some(SSpec::Linear { c }) => SScale::linear(*c),
            Some(SSpec::Power { eta }) => SScale::power(*eta),
            Some(SSpec::RLogR) => Ok(SScale::r_log_r()),
            Some(SSpec::Exp) => Ok(SScale::exp()),
            None => Err(Error::config(format!("s.{name}"), "not declared")),
        }
    }

    fn resolve_product(&self, name: &str, base: &Path) -> Result<CanonicalProduct> {
        match self.resolve_model(name, base)? {
            FunctionModel::CanonicalProduct(p) => Ok(p),
            other => Err(Error::config(format!("models.{name}"), format!("expected a product, found a {} model", other.variant_name()))),
        }
    }

    pub fn resolve_model(&self, name: &str, base: &Path) -> Result<FunctionModel> {
        let spec = self.models.get(name).ok_or_else(|| Error::config(format!("models.{name}"), "not declared"))?;
        match spec {
            ModelSpec::Identity => Ok(FunctionModel::identity()),
            ModelSpec::Polynomial { coeffs } => Ok(FunctionModel::polynomial(coeffs)),
            ModelSpec::Rational { numer, denom } => FunctionModel::rational(numer, denom),
            ModelSpec::ExampleF { phi, kappa } => {
                Ok(FunctionModel::CanonicalProduct(CanonicalProduct::new(ZeroSequence::example_f(self.resolve_phi(phi, base)?, *kappa)?)))
            }
            ModelSpec::ExampleG { phi, c } => {
                Ok(FunctionModel::CanonicalProduct(CanonicalProduct::new(ZeroSequence::example_g(self.resolve_phi(phi, base)?, *c)?)))
            }
            ModelSpec::Product { zeros } => {
                let rows: Vec<crate::models::ZeroRow> = io::read_csv_rows(&base.join(zeros))?;
                let zs = ZeroSequence::explicit(rows.into_iter().map(Into::into).collect())?;
                Ok(FunctionModel::CanonicalProduct(CanonicalProduct::new(zs)))
            }
            ModelSpec::Quotient { constant, power, numer, denom } => Ok(FunctionModel::Quotient(Quotient::new(
                Complex64::new(constant[0], constant[1]),
                *power,
                self.resolve_product(numer, base)?,
                self.resolve_product(denom, base)?,
            )?)),
            ModelSpec::Series { path, precision, exact } => {
                let rows = io::read_csv_rows(&base.join(path))?;
                Ok(FunctionModel::PowerSeries(PowerSeries::from_decimal_rows(&rows, *precision, *exact)?))
            }
        }
    }

    pub fn resolve_equation(&self, name: &str, base: &Path) -> Result<(QDifferenceEquation, &EquationSpec)> {
        let spec = self.equations.get(name).ok_or_else(|| Error::config(format!("equations.{name}"), "not declared"))?;
        let coeffs = spec.coeffs.iter().map(|c| self.resolve_model(c, base)).collect::<Result<Vec<_>>>()?;
        let rhs = match &spec.rhs {
            Some(n) => self.resolve_model(n, base)?,
            None => FunctionModel::polynomial(&[]),
        };
        let mut eq = QDifferenceEquation::new(Complex64::new(spec.q[0], spec.q[1]), coeffs, rhs)?;
        if spec.clear_denominators {
            eq = crate::qdiff::clear_denominators(&eq)?.equation;
        }
        Ok((eq, spec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[defaults]
seed = 7
grid = { kind = "log_uniform", log_r_min = 10.0, log_r_max = 1000.0, points = 60 }

[phi.half]
kind = "power"
beta = 0.5

[s.sq]
kind = "power"
eta = 2.0

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
truncation = 2000

[[runs]]
name = "p"
op = "params"
phi = "log"
s = "sq"
output = "params.csv"

[[runs]]
name = "v"
op = "verify"
equation = "theta"
phi = "log"
s = "sq"
output = "verify.json"
"#;

    #[test]
    fn parses_and_round_trips() {
        let c = ExperimentConfig::from_toml(SAMPLE).unwrap();
        c.validate().unwrap();
        assert_eq!(c.runs.len(), 2);
        assert_eq!(c.runs[1].op, Op::Verify);
        let again = ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn unresolved_reference_names_its_path() {
        let mut c = ExperimentConfig::from_toml(SAMPLE).unwrap();
        c.runs[1].equation = Some("missing".into());
        match c.validate().unwrap_err() {
            Error::Config { path, .. } => assert_eq!(path, "runs[1].equation"),
            e => panic!("{e}"),
        }
        let mut c = ExperimentConfig::from_toml(SAMPLE).unwrap();
        c.equations.get_mut("theta").unwrap().coeffs[1] = "nope".into();
        assert!(matches!(c.validate(), Err(Error::Config { .. })));
    }

    #[test]
    fn empty_config_is_valid() {
        let c = ExperimentConfig::from_toml("").unwrap();
        c.validate().unwrap();
        assert!(c.runs.is_empty());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(ExperimentConfig::from_toml("[defaults]\nprecision = 3\n").is_err());
    }

    #[test]
    fn resolves_the_equation() {
        let c = ExperimentConfig::from_toml(SAMPLE).unwrap();
        let (eq, spec) = c.resolve_equation("theta", Path::new(".")).unwrap();
        assert_eq!(eq.order(), 1);
        assert_eq!(spec.truncation, 2000);
        assert!(!eq.is_homogeneous());
    }
}
