//! Growth scales φ and s, their parameters and admissibility checks.

mod admissibility;
mod params;
mod phi;
mod psi;
mod s;
mod uvw;

pub use admissibility::{
    check_admissibility, check_admissibility_with, AdmissibilityOptions, AdmissibilityReport, Check, GrowthCondition,
};
pub use params::{growth_params, growth_params_with, limit_exists, GrowthParams, ParamOptions, TailDiagnostics};
pub use phi::{BuiltinPhi, PhiFlags, PhiKind, PhiScale, PhiTable, Polyline, TableRow};
pub use psi::{check_psi_bounds, check_psi_bounds_with, psi_mu, t_psi_mu, PsiBounds};
pub use s::{SFlags, SKind, SScale};
pub use uvw::{auxiliary_uvw, check_uvw, StepTriple, UvwCheck};
