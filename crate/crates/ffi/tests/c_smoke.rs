//! Compiles a C program against the generated header and the static library, then runs it.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "phigrowth.h"

#define CHECK(call) do { PgStatus s_ = (call); if (s_ != PG_STATUS_OK) { \
    char buf[256]; pg_last_error_message(buf, sizeof buf); \
    fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_, buf); return 1; } } while (0)

int main(void) {
    double a0c[] = {0.0, -1.0}, one[] = {1.0};
    PgModel *a0 = NULL, *a1 = NULL, *rhs = NULL;
    CHECK(pg_model_polynomial(a0c, NULL, 2, &a0));
    CHECK(pg_model_polynomial(one, NULL, 1, &a1));
    CHECK(pg_model_polynomial(one, NULL, 1, &rhs));
    const PgModel *coeffs[] = {a0, a1};
    PgEquation *eq = NULL;
    CHECK(pg_equation_new(2.0, 0.0, coeffs, 2, rhs, &eq));
    PgSolution *sol = NULL;
    CHECK(pg_solve(eq, 100, 0, &sol));
    double re, im;
    CHECK(pg_solution_coeff(sol, 3, &re, &im));
    if (re != 1.0 / 64.0 || im != 0.0) { fprintf(stderr, "c_3 = %g\n", re); return 2; }
    PgResidual res;
    CHECK(pg_solution_residual(eq, sol, 0.0, 16, &res));
    if (!(res.max_log_residual < -50.0 * log(10.0))) { fprintf(stderr, "residual %g\n", res.max_log_residual); return 3; }
    if (pg_solve(NULL, 10, 0, &sol) != PG_STATUS_NULL_POINTER) return 4;
    pg_solution_free(sol);
    pg_equation_free(eq);
    pg_model_free(a0);
    pg_model_free(a1);
    pg_model_free(rhs);
    printf("ok %s\n", pg_version());
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    // target/<profile>/deps/<test> -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libphigrowth_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = Command::new(&cc)
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("C compiler runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let run = Command::new(&exe).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(run.status.success(), "{stdout}{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(stdout.trim(), format!("ok {}", env!("CARGO_PKG_VERSION")));
}
