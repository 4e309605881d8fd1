use std::ffi::{c_char, CStr};
use std::ptr;

use phigrowth_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        pg_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn phi(kind: PgPhiKind, param: f64) -> *mut PgPhi {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { pg_phi_new(kind, param, &mut p) }, PgStatus::Ok);
    p
}

fn poly(re: &[f64]) -> *mut PgModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { pg_model_polynomial(re.as_ptr(), ptr::null(), re.len(), &mut m) }, PgStatus::Ok);
    m
}

/// `f(2z) − z f(z) = 1`, whose solution has `c_k = 2^{−k(k+1)/2}`.
fn theta() -> *mut PgEquation {
    let (a0, a1, rhs) = (poly(&[0.0, -1.0]), poly(&[1.0]), poly(&[1.0]));
    let coeffs = [a0 as *const PgModel, a1 as *const PgModel];
    let mut eq = ptr::null_mut();
    assert_eq!(unsafe { pg_equation_new(2.0, 0.0, coeffs.as_ptr(), 2, rhs, &mut eq) }, PgStatus::Ok);
    unsafe {
        pg_model_free(a0);
        pg_model_free(a1);
        pg_model_free(rhs);
    }
    eq
}

#[test]
fn log_phi_of_log_scale() {
    let p = phi(PgPhiKind::Log, 0.0);
    let mut v = 0.0;
    assert_eq!(unsafe { pg_phi_log_phi(p, 10.0, &mut v) }, PgStatus::Ok);
    assert!((v - 10f64.ln()).abs() < 1e-15);
    unsafe { pg_phi_free(p) };
}

#[test]
fn growth_params_for_log_and_r_squared() {
    let p = phi(PgPhiKind::Log, 0.0);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { pg_s_new(PgSKind::Power, 2.0, &mut s) }, PgStatus::Ok);
    let grid = PgGrid { kind: PgGridKind::LogLogUniform, log_r_min: 2f64.exp(), log_r_max: 700f64.exp(), points: 200 };
    let mut g = PgGrowthParams::default();
    assert_eq!(unsafe { pg_growth_params(p, s, &grid, &mut g) }, PgStatus::Ok);
    for v in [g.alpha, g.beta, g.gamma] {
        assert!((v - 1.0).abs() < 0.05, "{g:?}");
    }
    unsafe {
        pg_phi_free(p);
        pg_s_free(s);
    }
}

#[test]
fn q_theta_solution_residual_and_order() {
    let eq = theta();
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { pg_solve(eq, 300, 0, &mut sol) }, PgStatus::Ok);
    assert_eq!(unsafe { pg_solution_len(sol) }, 301);
    assert!(unsafe { pg_solution_precision(sol) } > 53);
    for k in [0usize, 1, 5, 30] {
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(unsafe { pg_solution_coeff(sol, k, &mut re, &mut im) }, PgStatus::Ok);
        assert_eq!((re, im), (2f64.powi(-((k * (k + 1) / 2) as i32)), 0.0));
    }
    // far below the double range
    let mut l = 0.0;
    assert_eq!(unsafe { pg_solution_log_abs_coeff(sol, 300, &mut l) }, PgStatus::Ok);
    let exact = -(300.0 * 301.0 / 2.0) * std::f64::consts::LN_2;
    assert!((l - exact).abs() < 1e-9 * exact.abs());

    let mut res = PgResidual::default();
    assert_eq!(unsafe { pg_solution_residual(eq, sol, 0.0, 32, &mut res) }, PgStatus::Ok);
    assert!(res.max_log_residual < -50.0 * std::f64::consts::LN_10, "{res:?}");

    let mut m = ptr::null_mut();
    assert_eq!(unsafe { pg_solution_model(sol, &mut m) }, PgStatus::Ok);
    let p = phi(PgPhiKind::Log, 0.0);
    let grid = PgGrid { kind: PgGridKind::LogUniform, log_r_min: 4.0, log_r_max: 160.0, points: 40 };
    let (mut rho, mut inf) = (0.0, true);
    assert_eq!(unsafe { pg_model_order(m, p, PgQuantity::LogM, &grid, &mut rho, &mut inf) }, PgStatus::Ok, "{}", last_error());
    assert!((rho - 2.0).abs() < 0.15 && !inf, "{rho}");
    unsafe {
        pg_phi_free(p);
        pg_model_free(m);
        pg_solution_free(sol);
        pg_equation_free(eq);
    }
}

#[test]
fn example_f_counting_order() {
    let p = phi(PgPhiKind::Log, 0.0);
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { pg_model_example_f(p, 0.5, &mut f) }, PgStatus::Ok);
    let grid = PgGrid { kind: PgGridKind::LogLogUniform, log_r_min: 10.0, log_r_max: 2000.0, points: 200 };
    let mut rho = 0.0;
    assert_eq!(unsafe { pg_model_order(f, p, PgQuantity::BigN, &grid, &mut rho, ptr::null_mut()) }, PgStatus::Ok);
    assert!((rho - 1.5).abs() < 0.1, "{rho}");
    unsafe {
        pg_model_free(f);
        pg_phi_free(p);
    }
}

#[test]
fn characteristic_of_z_is_log_r() {
    let z = poly(&[0.0, 1.0]);
    let mut c = PgCharacteristic::default();
    assert_eq!(unsafe { pg_model_characteristic(z, 3.0, &mut c) }, PgStatus::Ok);
    assert!((c.t - 3.0).abs() < 1e-12 && c.log_r == 3.0, "{c:?}");
    let (mut lm, mut th) = (0.0, 0.0);
    assert_eq!(unsafe { pg_model_max_modulus(z, 3.0, &mut lm, &mut th) }, PgStatus::Ok);
    assert!((lm - 3.0).abs() < 1e-12);
    unsafe { pg_model_free(z) };
}

#[test]
fn lemma_a_holds_for_a_rational_model() {
    let (num, den) = ([1.0, -3.0, 2.0], [5.0, 1.0]);
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { pg_model_rational(num.as_ptr(), 3, den.as_ptr(), 2, &mut m) }, PgStatus::Ok);
    let mut out = PgLemmaA::default();
    assert_eq!(unsafe { pg_lemma_a_check(m, 4.0, 10.0, 2.0, 0.0, 0.5, &mut out) }, PgStatus::Ok);
    assert!(out.margin >= 0.0 && out.bound >= out.lhs, "{out:?}");
    unsafe { pg_model_free(m) };
}

#[test]
fn inconsistent_equation_reports_its_index() {
    let (a0, a1, rhs) = (poly(&[1.0]), poly(&[-1.0]), poly(&[1.0]));
    let coeffs = [a0 as *const PgModel, a1 as *const PgModel];
    let mut eq = ptr::null_mut();
    assert_eq!(unsafe { pg_equation_new(2.0, 0.0, coeffs.as_ptr(), 2, rhs, &mut eq) }, PgStatus::Ok);
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { pg_solve(eq, 10, 0, &mut sol) }, PgStatus::InconsistentEquation);
    assert!(sol.is_null());
    assert!(last_error().contains("k = 0"), "{}", last_error());
    unsafe {
        pg_equation_free(eq);
        pg_model_free(a0);
        pg_model_free(a1);
        pg_model_free(rhs);
    }
}

#[test]
fn invalid_arguments_and_nulls() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { pg_phi_new(PgPhiKind::Power, -1.0, &mut p) }, PgStatus::InvalidArgument);
    assert!(p.is_null() && !last_error().is_empty());
    assert_eq!(unsafe { pg_phi_new(PgPhiKind::Log, 0.0, ptr::null_mut()) }, PgStatus::NullPointer);
    let mut v = 0.0;
    assert_eq!(unsafe { pg_phi_log_phi(ptr::null(), 1.0, &mut v) }, PgStatus::NullPointer);
    assert_eq!(last_error(), "phi is null");

    let zero = poly(&[0.0]);
    let coeffs = [zero as *const PgModel];
    let mut eq = ptr::null_mut();
    assert_eq!(unsafe { pg_equation_new(2.0, 0.0, coeffs.as_ptr(), 1, ptr::null(), &mut eq) }, PgStatus::InvalidArgument);
    let null_coeffs = [ptr::null::<PgModel>()];
    assert_eq!(unsafe { pg_equation_new(2.0, 0.0, null_coeffs.as_ptr(), 1, ptr::null(), &mut eq) }, PgStatus::NullPointer);
    assert_eq!(last_error(), "coeffs[0] is null");
    unsafe {
        pg_model_free(zero);
        pg_model_free(ptr::null_mut());
    }
    assert_eq!(unsafe { pg_solution_len(ptr::null()) }, 0);
}

#[test]
fn error_message_is_truncated_to_the_buffer() {
    assert_eq!(unsafe { pg_phi_log_phi(ptr::null(), 1.0, ptr::null_mut()) }, PgStatus::NullPointer);
    let full = pg_last_error_length();
    let mut buf = [1 as c_char; 4];
    assert_eq!(unsafe { pg_last_error_message(buf.as_mut_ptr(), 4) }, full);
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "phi");
}

#[test]
fn coefficient_index_past_the_end() {
    let eq = theta();
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { pg_solve(eq, 5, 128, &mut sol) }, PgStatus::Ok);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { pg_solution_coeff(sol, 6, &mut re, &mut im) }, PgStatus::OutOfRange);
    unsafe {
        pg_solution_free(sol);
        pg_equation_free(eq);
    }
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(pg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
