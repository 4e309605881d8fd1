//! Config-driven experiment runner behind the `phigrowth` binary.

pub mod config;
pub mod io;
pub mod repro;
pub mod runner;

pub use config::{Defaults, EquationSpec, ExperimentConfig, ModelSpec, Op, PhiSpec, RunSpec, SSpec};
pub use repro::{repro_config, Suite};
pub use runner::{run_config, RunOutcome, RunReport, RunStatus, RunnerOptions};
