//! Linear q-difference equations: series solutions, residuals and growth-theorem checks.

mod equation;
mod ladder;
mod solver;
mod verify;

pub use equation::{clear_denominators, compose_scale, ClearedEquation, QDifferenceEquation};
pub use ladder::{ladder_check, ladder_for_equation, mk_circle_ladder, Ladder, LadderOptions, LadderReport, LadderRow};
pub use solver::{residual, solve_series, solve_series_with, ResidualReport, ResidualRow, SeriesSolution, SolveOptions};
pub use verify::{
    estimate_order, hei_check, verify_solution_model, verify_theorems, AdmissibilitySummary, BoundRecord, BoundStatus, Branch,
    HeiReport, HeiRow, TheoremReport, VerifyOptions,
};
