use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use phigrowth::cli::io::write_json;
use phigrowth::cli::{repro_config, run_config, ExperimentConfig, Op, RunReport, RunnerOptions, Suite};
use phigrowth::Error;

/// φ-order growth lab: Nevanlinna functionals, growth scales and q-difference equations.
#[derive(Parser)]
#[command(name = "phigrowth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Directory for artifacts.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Run only the named runs (repeatable).
    #[arg(long)]
    only: Vec<String>,
    /// Base precision for the series solver, in bits.
    #[arg(long)]
    precision_bits: Option<u32>,
    /// Execute independent runs concurrently.
    #[arg(long)]
    parallel: bool,
    /// Also write the run report (with wall times) to this JSON file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct WithConfig {
    /// Experiment file (TOML).
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every run in the config.
    Run(WithConfig),
    /// Execute a built-in reproduction suite.
    Repro {
        /// example-F, example-G, q-theta, params-matrix or bounds-suite.
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Growth parameters α, β, γ, ζ, κ.
    Params(WithConfig),
    /// Admissibility checks for a (φ, s) pair.
    Admissible(WithConfig),
    /// φ-order of T, log M, n or N.
    Order(WithConfig),
    /// φ-exponent of convergence of a zero sequence.
    Exponent(WithConfig),
    /// Minimum-modulus check for a canonical product.
    ProductCheck(WithConfig),
    /// Power-series solution of a q-difference equation.
    Solve(WithConfig),
    /// Residual of a series solution on circles.
    Residual(WithConfig),
    /// Growth bounds for a series solution.
    Verify(WithConfig),
    /// Maximum modulus along a geometric circle ladder.
    Ladder(WithConfig),
    /// Logarithmic q-difference bound against quadrature.
    LemmaA(WithConfig),
    /// Order relations between T, N, n and λ.
    Relations(WithConfig),
    /// Auxiliary step functions u, v, w.
    Uvw(WithConfig),
    /// Bounds for ψ_μ.
    Psi(WithConfig),
}

fn options(common: &Common, base_dir: &Path) -> RunnerOptions {
    RunnerOptions {
        out_dir: common.out_dir.clone(),
        base_dir: base_dir.to_path_buf(),
        only: common.only.clone(),
        precision_bits: common.precision_bits,
        parallel: common.parallel,
    }
}

fn load(path: &Path) -> Result<ExperimentConfig, Error> {
    ExperimentConfig::load(path)
}

fn base_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// Keeps only the runs of `op`; naming none of them is a usage error.
fn restrict(mut cfg: ExperimentConfig, op: Op) -> Result<ExperimentConfig, Error> {
    cfg.runs.retain(|r| r.op == op);
    if cfg.runs.is_empty() {
        return Err(Error::config("runs", format!("the config has no `{}` runs", op.name())));
    }
    Ok(cfg)
}

fn print(report: &RunReport) {
    for r in &report.runs {
        let status = serde_json::to_value(r.status).ok().and_then(|v| v.as_str().map(str::to_uppercase)).unwrap_or_default();
        let out = r.output.as_ref().map(|p| format!(" -> {}", p.display())).unwrap_or_default();
        println!("{status:<15} {:<24} {:<13} {:>8.2}s  {}{out}", r.name, r.op.name(), r.wall_time_s, r.summary);
    }
    let ok = report.runs.iter().filter(|r| r.status.is_success()).count();
    println!("{ok}/{} runs succeeded", report.runs.len());
}

fn execute(cfg: &ExperimentConfig, common: &Common, base: &Path) -> Result<RunReport, Error> {
    let report = run_config(cfg, &options(common, base))?;
    if let Some(path) = &common.report {
        write_json(path, &report)?;
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => load(&a.config).and_then(|c| execute(&c, &a.common, &base_of(&a.config))),
        Command::Repro { suite, common } => {
            suite.parse::<Suite>().and_then(|s| execute(&repro_config(s), &common, Path::new(".")))
        }
        cmd => {
            let (op, a) = match cmd {
                Command::Params(a) => (Op::Params, a),
                Command::Admissible(a) => (Op::Admissible, a),
                Command::Order(a) => (Op::Order, a),
                Command::Exponent(a) => (Op::Exponent, a),
                Command::ProductCheck(a) => (Op::ProductCheck, a),
                Command::Solve(a) => (Op::Solve, a),
                Command::Residual(a) => (Op::Residual, a),
                Command::Verify(a) => (Op::Verify, a),
                Command::Ladder(a) => (Op::Ladder, a),
                Command::LemmaA(a) => (Op::LemmaA, a),
                Command::Relations(a) => (Op::Relations, a),
                Command::Uvw(a) => (Op::Uvw, a),
                Command::Psi(a) => (Op::Psi, a),
                Command::Run(_) | Command::Repro { .. } => unreachable!(),
            };
            load(&a.config).and_then(|c| restrict(c, op)).and_then(|c| execute(&c, &a.common, &base_of(&a.config)))
        }
    };
    match result {
        Ok(report) => {
            print(&report);
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
