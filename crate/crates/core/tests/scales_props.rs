use phigrowth::scales::{auxiliary_uvw, check_uvw, t_psi_mu, BuiltinPhi, PhiScale, SScale};
use proptest::prelude::*;

fn builtin() -> impl Strategy<Value = PhiScale> {
    prop_oneof![
        (0.2..3.0f64).prop_map(|a| PhiScale::builtin(BuiltinPhi::LogPower, a).unwrap()),
        (0.1..0.9f64).prop_map(|b| PhiScale::builtin(BuiltinPhi::ExpLogPower, b).unwrap()),
        (0.1..1.0f64).prop_map(|b| PhiScale::builtin(BuiltinPhi::Power, b).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psi_for_log_is_exact(mu in 0.05..5.0f64, x in 2.0..500.0f64) {
        // t ψ_μ(t) φ(t) = μ + 1 when φ = log
        let v = t_psi_mu(&PhiScale::log(), mu, x).unwrap() * x;
        prop_assert!((v / (mu + 1.0) - 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn builtin_inverse_round_trips(phi in builtin(), x in 1.0..600.0f64) {
        let back = phi.inverse_log(phi.log_phi(x)).unwrap();
        prop_assert!((back - x).abs() < 1e-9 * x, "{back} vs {x}");
    }

    #[test]
    fn log_phi_is_increasing(phi in builtin(), x in 1.0..600.0f64, dx in 1e-3..10.0f64) {
        prop_assert!(phi.log_phi(x) < phi.log_phi(x + dx));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn uvw_properties_hold_for_power_scales(eta in 1.5..3.0f64, seed in 0u64..1000) {
        let s = SScale::power(eta).unwrap();
        let t = auxiliary_uvw(&s, 2.0, 1e4).unwrap();
        let chk = check_uvw(&t, &s, 300, seed);
        prop_assert!(chk.all_hold(), "{chk:?}");
    }
}
