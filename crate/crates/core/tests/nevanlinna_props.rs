use std::f64::consts::{LN_2, TAU};

use num_complex::Complex64;
use phigrowth::grid::GridSpec;
use phigrowth::models::{FunctionModel, Poly, Rational};
use phigrowth::nevanlinna::{characteristic_at, integral_dichotomy, lemma_a_check, max_modulus_at, QuadOptions, Verdict};
use phigrowth::qdiff::compose_scale;
use phigrowth::scales::{BuiltinPhi, PhiScale};
use proptest::prelude::*;

/// `c · Π(z − a_i) / Π(z − b_j)` with every root and pole given as `(log|·|, arg)`.
#[derive(Clone, Debug)]
struct RationalCase {
    log_c: f64,
    zeros: Vec<(f64, f64)>,
    poles: Vec<(f64, f64)>,
}

impl RationalCase {
    fn points(v: &[(f64, f64)]) -> Vec<Complex64> {
        v.iter().map(|&(l, a)| Complex64::from_polar(l.exp(), a)).collect()
    }

    fn model(&self) -> FunctionModel {
        let numer = Poly::from_roots(&Self::points(&self.zeros)).scale(Complex64::new(self.log_c.exp(), 0.0));
        FunctionModel::Rational(Rational::new(numer, Poly::from_roots(&Self::points(&self.poles))).unwrap())
    }

    fn reciprocal(&self) -> FunctionModel {
        let numer = Poly::from_roots(&Self::points(&self.poles)).scale(Complex64::new((-self.log_c).exp(), 0.0));
        FunctionModel::Rational(Rational::new(numer, Poly::from_roots(&Self::points(&self.zeros))).unwrap())
    }

    /// `log|f(0)|` straight from the factorization.
    fn log_abs_at_origin(&self) -> f64 {
        self.log_c + self.zeros.iter().map(|z| z.0).sum::<f64>() - self.poles.iter().map(|p| p.0).sum::<f64>()
    }

    /// No zero or pole within `gap` of the circle `log r = x`.
    fn clear_of(&self, x: f64, gap: f64) -> bool {
        self.zeros.iter().chain(&self.poles).all(|p| (p.0 - x).abs() > gap)
    }
}

fn points(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..2.0f64, 0.0..TAU), 0..=max)
}

fn rational(max_zeros: usize, max_poles: usize) -> impl Strategy<Value = RationalCase> {
    (-2.0..2.0f64, points(max_zeros), points(max_poles)).prop_map(|(log_c, zeros, poles)| RationalCase { log_c, zeros, poles })
}

fn t(model: &FunctionModel, x: f64) -> f64 {
    let s = characteristic_at(model, x, &QuadOptions::default()).unwrap();
    assert_eq!(s.log_r, x, "circle was moved");
    s.t
}

const TOL: f64 = 1e-7;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn first_main_theorem(case in rational(4, 3), x in -0.5..2.5f64) {
        prop_assume!(case.clear_of(x, 0.05));
        let lhs = t(&case.model(), x) - t(&case.reciprocal(), x);
        prop_assert!((lhs - case.log_abs_at_origin()).abs() < TOL * (1.0 + lhs.abs()), "{lhs} vs {}", case.log_abs_at_origin());
    }

    #[test]
    fn characteristic_is_nondecreasing(case in rational(4, 3), x in -0.5..2.5f64, dx in 0.01..1.0f64) {
        prop_assume!(case.clear_of(x, 0.05) && case.clear_of(x + dx, 0.05));
        let m = case.model();
        prop_assert!(t(&m, x) <= t(&m, x + dx) + TOL);
    }

    #[test]
    fn characteristic_against_maximum_modulus(case in rational(5, 0), x in -0.5..2.5f64) {
        let f = case.model();
        let log_m = max_modulus_at(&f, x).unwrap().0.max(0.0);
        prop_assert!(t(&f, x) <= log_m + TOL);
        // log M(r) ≤ (R + r)/(R − r) T(R) with R = 2r
        prop_assert!(log_m <= 3.0 * t(&f, x + LN_2) + TOL);
    }

    #[test]
    fn dilation(case in rational(3, 3), x in -0.5..2.0f64, log_c in -0.5..0.5f64, arg in 0.0..TAU) {
        prop_assume!(case.clear_of(x + log_c, 0.05));
        let c = Complex64::from_polar(log_c.exp(), arg);
        let scaled = compose_scale(&case.model(), c).unwrap();
        let (a, b) = (t(&scaled, x), t(&case.model(), x + log_c));
        prop_assert!((a - b).abs() < TOL * (1.0 + b.abs()), "{a} vs {b}");
    }

    #[test]
    fn lemma_a_dominates(
        case in rational(3, 2),
        x in 1.0..2.0f64,
        frac in 0.05..1.0f64,
        qi in 0usize..3,
        di in 0usize..3,
    ) {
        let q = [Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 1.0)][qi];
        let delta = [0.25, 0.5, 0.75][di];
        let r = x.exp();
        let lo = r.max(q.norm() * r);
        let lambda = lo + frac * (r * r - lo);
        prop_assume!(case.clear_of(x, 0.05) && case.clear_of(x + q.norm().ln(), 0.05));
        let cmp = lemma_a_check(&case.model(), r, lambda, q, delta, &QuadOptions::default()).unwrap();
        prop_assert!(cmp.margin >= 0.0, "{cmp:?}");
    }

    #[test]
    fn dichotomy_flips_at_the_order(rho in 0.3..3.0f64, gap in 0.5..1.5f64, pi in 0usize..4) {
        // the top of each grid keeps φ^ρ finite for ρ < 3
        let (phi, top) = match pi {
            0 => (PhiScale::log(), 1e100),
            1 => (PhiScale::builtin(BuiltinPhi::Power, 0.5).unwrap(), 450.0),
            2 => (PhiScale::builtin(BuiltinPhi::ExpLogPower, 0.5).unwrap(), 5e4),
            _ => (PhiScale::identity(), 230.0),
        };
        let grid = GridSpec::LogLogUniform { log_r_min: 10.0, log_r_max: top, points: 200 }.build().unwrap();
        let samples: Vec<(f64, f64)> = grid.log_r().iter().map(|&x| (x, (rho * phi.log_phi(x)).exp())).collect();
        prop_assert_eq!(integral_dichotomy(&samples, &phi, rho + gap, 0.05).unwrap().verdict, Verdict::Convergent);
        prop_assert_eq!(integral_dichotomy(&samples, &phi, rho - gap, 0.05).unwrap().verdict, Verdict::Divergent);
    }
}
