use std::f64::consts::LN_10;

use num_complex::Complex64;
use phigrowth::bigfloat::log_abs_fast;
use phigrowth::grid::RadiusGrid;
use phigrowth::models::FunctionModel;
use phigrowth::Error;
use phigrowth::qdiff::{residual, solve_series, QDifferenceEquation, SeriesSolution};
use proptest::prelude::*;
use rug::Complex;

/// Dyadic coefficients, so sums of right sides stay exact in `f64`.
fn poly(max_degree: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-32i32..=32).prop_map(|k| k as f64 / 16.0), 1..=max_degree + 1)
}

/// Constant term bounded away from zero.
fn anchored(max_degree: usize) -> impl Strategy<Value = Vec<f64>> {
    (poly(max_degree), 3i32..=32, any::<bool>()).prop_map(|(mut c, a0, neg)| {
        c[0] = if neg { -a0 } else { a0 } as f64 / 16.0;
        c
    })
}

/// `|q| > 1` with `1/q` and its powers exact in binary.
fn q() -> impl Strategy<Value = Complex64> {
    prop::sample::select(vec![
        Complex64::new(2.0, 0.0),
        Complex64::new(-2.0, 0.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(4.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(2.0, -2.0),
    ])
}

#[derive(Clone, Debug)]
struct Case {
    q: Complex64,
    coeffs: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl Case {
    fn equation(&self, rhs: &[f64]) -> QDifferenceEquation {
        let coeffs = self.coeffs.iter().map(|c| FunctionModel::polynomial(c)).collect();
        QDifferenceEquation::new(self.q, coeffs, FunctionModel::polynomial(rhs)).unwrap()
    }
}

fn case() -> impl Strategy<Value = Case> {
    (q(), 1usize..=2)
        .prop_flat_map(|(q, n)| {
            let middle = prop::collection::vec(poly(2), n - 1);
            (Just(q), anchored(2), middle, anchored(2), poly(2))
        })
        .prop_map(|(q, a0, middle, an, rhs)| {
            let mut coeffs = vec![a0];
            coeffs.extend(middle);
            coeffs.push(an);
            Case { q, coeffs, rhs }
        })
}

/// `c_k`, zero past the end of an exact (polynomial) solution.
fn coeff(s: &SeriesSolution, k: usize) -> Complex {
    s.coeffs.get(k).cloned().unwrap_or_else(|| Complex::with_val(s.precision, 0))
}

/// `log|a − b| − log|a|`, or `−∞` when both vanish.
fn log_rel_diff(a: &Complex, b: &Complex) -> f64 {
    let d = Complex::with_val(a.prec().0, a - b);
    let (ld, la) = (log_abs_fast(&d), log_abs_fast(a));
    if ld == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        ld - la
    }
}

fn agree(a: &SeriesSolution, b: &SeriesSolution, upto: usize, digits: f64) -> Result<(), TestCaseError> {
    for k in 0..upto {
        let (x, y) = (coeff(a, k), coeff(b, k));
        let d = log_rel_diff(&x, &y);
        prop_assert!(d < -digits * LN_10 || (log_abs_fast(&x) == f64::NEG_INFINITY && log_abs_fast(&y) < -digits * LN_10), "k = {k}: {d}");
    }
    Ok(())
}

const K: usize = 80;

/// Exact dyadic data can hit a resonance with a nonzero right side; those cases have no solution.
fn solve(eq: &QDifferenceEquation) -> Option<SeriesSolution> {
    match solve_series(eq, K, None) {
        Err(Error::InconsistentEquation { .. }) => None,
        r => Some(r.unwrap()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn residual_vanishes_relative_to_the_terms(c in case()) {
        let eq = c.equation(&c.rhs);
        let sol = solve(&eq);
        prop_assume!(sol.is_some());
        let sol = sol.unwrap();
        // zeros of a_n give the series a finite radius; stay well inside it
        let x = (sol.to_model().unwrap().max_log_r() - eq.order() as f64 * c.q.norm().ln() - 2.0).min(0.0);
        let rep = residual(&eq, &sol, &RadiusGrid::new(vec![x]).unwrap(), 32).unwrap();
        let row = &rep.rows[0];
        prop_assert!(row.max_log_residual == f64::NEG_INFINITY || row.max_log_residual - row.log_scale < -40.0 * LN_10, "{row:?}");
    }

    #[test]
    fn inverted_equation_has_the_same_solution(c in case()) {
        let eq = c.equation(&c.rhs);
        let a = solve(&eq);
        prop_assume!(a.is_some());
        let b = solve(&eq.inverted().unwrap()).expect("same resonances after inversion");
        agree(&a.unwrap(), &b, 40, 30.0)?;
    }

    #[test]
    fn solutions_are_linear_in_the_right_side(c in case(), other in poly(2)) {
        let sum: Vec<f64> = (0..c.rhs.len().max(other.len()))
            .map(|i| c.rhs.get(i).unwrap_or(&0.0) + other.get(i).unwrap_or(&0.0))
            .collect();
        let (s1, s2, s) = (solve(&c.equation(&c.rhs)), solve(&c.equation(&other)), solve(&c.equation(&sum)));
        prop_assume!(s1.is_some() && s2.is_some());
        let (s1, s2) = (s1.unwrap(), s2.unwrap());
        let s = s.expect("a sum of solvable right sides is solvable");
        // cancellation in the sum can cost digits, so compare against the larger summand
        for k in 0..40 {
            let (x, y) = (coeff(&s1, k), coeff(&s2, k));
            let added = Complex::with_val(s.precision, &x + &y);
            let d = Complex::with_val(s.precision, &coeff(&s, k) - &added);
            let scale = log_abs_fast(&x).max(log_abs_fast(&y));
            prop_assert!(log_abs_fast(&d) - scale < -30.0 * LN_10 || scale == f64::NEG_INFINITY, "k = {k}");
        }
    }
}
