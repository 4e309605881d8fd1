//! Nevanlinna functionals, φ-order estimators and checks of the order relations.

mod characteristic;
mod lemma_a;
mod minmod;
mod order;
mod quadrature;
mod relations;

pub use characteristic::{characteristic, characteristic_at, counting, max_modulus, max_modulus_at, quantity_samples, CharacteristicSample, Counting};
pub use order::{
    integral_dichotomy, order_estimate, order_estimate_bins, phi_exponent, DichotomyResult, ExponentEstimate, ExponentMethod,
    ExponentReport, MuScan, OrderEstimate, Quantity, Verdict, DEFAULT_BINS, SPREAD_LIMIT,
};
pub use quadrature::{
    log_q_difference, periodic_mean, proximity, proximity_on, proximity_reciprocal, proximity_shifted, suggest_clear_radius,
    QuadOptions, Quadrature,
};
pub use lemma_a::{lemma_a_bound, lemma_a_check, LemmaABound, LemmaAComparison, LemmaAInputs};
pub use minmod::{in_exclusion_disc, product_min_modulus_check, MinModOptions, MinModReport, MinModRow};
pub use relations::{relation_checks, CheckStatus, RelationCheck, RelationOptions, RelationReport};
