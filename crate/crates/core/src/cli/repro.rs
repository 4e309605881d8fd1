//! Built-in reproduction suites with pinned inputs.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::nevanlinna::Quantity;

use super::config::{EquationSpec, ExperimentConfig, ModelSpec, Op, PhiSpec, RunSpec, SSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ExampleF,
    ExampleG,
    QTheta,
    ParamsMatrix,
    BoundsSuite,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::ExampleF, Suite::ExampleG, Suite::QTheta, Suite::ParamsMatrix, Suite::BoundsSuite];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ExampleF => "example-F",
            Suite::ExampleG => "example-G",
            Suite::QTheta => "q-theta",
            Suite::ParamsMatrix => "params-matrix",
            Suite::BoundsSuite => "bounds-suite",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::config("suite", format!("unknown suite '{s}'; expected one of {}", names.join(", ")))
        })
    }
}

fn loglog(lo: f64, hi: f64, points: usize) -> GridSpec {
    GridSpec::LogLogUniform { log_r_min: lo, log_r_max: hi, points }
}

fn poly(c: &[f64]) -> ModelSpec {
    ModelSpec::Polynomial { coeffs: c.to_vec() }
}

fn run(name: &str, op: Op, output: &str, f: impl FnOnce(&mut RunSpec)) -> RunSpec {
    let mut r = RunSpec::new(name, op, output);
    f(&mut r);
    r
}

fn eq(q: f64, coeffs: &[&str], rhs: Option<&str>, truncation: usize, normalization: Option<[f64; 2]>) -> EquationSpec {
    EquationSpec {
        q: [q, 0.0],
        coeffs: coeffs.iter().map(|s| s.to_string()).collect(),
        rhs: rhs.map(Into::into),
        truncation,
        normalization,
        clear_denominators: false,
    }
}

pub fn repro_config(suite: Suite) -> ExperimentConfig {
    let mut c = ExperimentConfig::default();
    c.s.insert("two_r".into(), SSpec::Linear { c: 2.0 });
    c.s.insert("r_sq".into(), SSpec::Power { eta: 2.0 });
    c.s.insert("r_log_r".into(), SSpec::RLogR);
    match suite {
        Suite::ExampleF => {
            c.models.insert("F".into(), ModelSpec::ExampleF { phi: "log".into(), kappa: 0.5 });
            let g = loglog(10.0, 2000.0, 200);
            for (name, q) in [("n", Quantity::SmallN), ("N", Quantity::BigN)] {
                c.runs.push(run(&format!("order_{name}"), Op::Order, &format!("example_f_order_{name}.json"), |r| {
                    r.model = Some("F".into());
                    r.phi = Some("log".into());
                    r.quantity = Some(q);
                    r.grid = Some(g.clone());
                }));
            }
            c.runs.push(run("exponent", Op::Exponent, "example_f_exponent.json", |r| {
                r.model = Some("F".into());
                r.phi = Some("log".into());
                r.grid = Some(g.clone());
            }));
            c.runs.push(run("psi", Op::Psi, "example_f_psi.json", |r| {
                r.phi = Some("log".into());
                r.mu = Some(0.5);
                r.tau = Some(1.0);
                r.grid = Some(g.clone());
            }));
        }
        Suite::ExampleG => {
            c.models.insert("G".into(), ModelSpec::ExampleG { phi: "log".into(), c: 2.0 });
            c.runs.push(run("order_N", Op::Order, "example_g_order_N.json", |r| {
                r.model = Some("G".into());
                r.phi = Some("log".into());
                r.quantity = Some(Quantity::BigN);
                r.grid = Some(loglog(10.0, 1e250, 200));
            }));
            c.runs.push(run("exponent", Op::Exponent, "example_g_exponent.json", |r| {
                r.model = Some("G".into());
                r.phi = Some("log".into());
                r.grid = Some(loglog(10.0, 1e250, 200));
            }));
            c.runs.push(run("min_modulus", Op::ProductCheck, "example_g_min_modulus.csv", |r| {
                r.model = Some("G".into());
                r.phi = Some("log".into());
                r.s = Some("r_sq".into());
                r.lambda = Some(0.0);
                r.epsilon = Some(0.5);
                r.grid = Some(GridSpec::LogUniform { log_r_min: 10.0, log_r_max: 300.0, points: 80 });
            }));
        }
        Suite::QTheta => {
            c.models.insert("minus_z".into(), poly(&[0.0, -1.0]));
            c.models.insert("one".into(), poly(&[1.0]));
            c.equations.insert("theta".into(), eq(2.0, &["minus_z", "one"], Some("one"), 2000, None));
            c.runs.push(run("coefficients", Op::Solve, "q_theta_coefficients.csv", |r| r.equation = Some("theta".into())));
            c.runs.push(run("residual", Op::Residual, "q_theta_residual.json", |r| {
                r.equation = Some("theta".into());
                r.r = Some(1.0);
                r.tolerance = Some(1e-50);
            }));
            c.runs.push(run("verify", Op::Verify, "q_theta_verify.json", |r| {
                r.equation = Some("theta".into());
                r.phi = Some("log".into());
                r.s = Some("r_sq".into());
                r.grid = Some(GridSpec::LogUniform { log_r_min: 10.0, log_r_max: 1000.0, points: 40 });
            }));
        }
        Suite::ParamsMatrix => {
            let phis = [
                ("log", PhiSpec::Log),
                ("sqrt", PhiSpec::Power { beta: 0.5 }),
                ("exp_sqrt_log", PhiSpec::ExpLogPower { beta: 0.5 }),
                ("identity", PhiSpec::Identity),
            ];
            for (pn, spec) in phis {
                c.phi.insert(pn.into(), spec);
                for sn in ["two_r", "r_sq", "r_log_r"] {
                    c.runs.push(run(&format!("params_{pn}_{sn}"), Op::Params, &format!("params_{pn}_{sn}.csv"), |r| {
                        r.phi = Some(pn.into());
                        r.s = Some(sn.into());
                    }));
                }
            }
        }
        Suite::BoundsSuite => {
            c.models.insert("minus_z".into(), poly(&[0.0, -1.0]));
            c.models.insert("minus_one_minus_z".into(), poly(&[-1.0, -1.0]));
            c.models.insert("one".into(), poly(&[1.0]));
            c.models.insert("minus_two".into(), poly(&[-2.0]));
            c.models.insert("minus_three".into(), poly(&[-3.0]));
            c.equations.insert("theta".into(), eq(2.0, &["minus_z", "one"], Some("one"), 800, None));
            c.equations.insert("product".into(), eq(2.0, &["minus_one_minus_z", "one"], None, 800, Some([1.0, 0.0])));
            c.equations.insert("constant".into(), eq(2.0, &["one", "minus_two"], Some("minus_three"), 50, None));
            let grid = GridSpec::LogUniform { log_r_min: 10.0, log_r_max: 400.0, points: 40 };
            for (name, e, s) in
                [("theta_r_sq", "theta", "r_sq"), ("theta_two_r", "theta", "two_r"), ("product_r_sq", "product", "r_sq"), ("constant", "constant", "r_sq")]
            {
                c.runs.push(run(name, Op::Verify, &format!("bounds_{name}.json"), |r| {
                    r.equation = Some(e.into());
                    r.phi = Some("log".into());
                    r.s = Some(s.into());
                    r.grid = Some(grid.clone());
                }));
            }
            c.runs.push(run("theta_ladder", Op::Ladder, "bounds_theta_ladder.csv", |r| {
                r.equation = Some("theta".into());
                r.phi = Some("log".into());
                r.t0 = Some(1.3);
                r.rungs = Some(300);
            }));
        }
    }
    c
}
