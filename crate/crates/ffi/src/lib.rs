//! C ABI over `phigrowth`.
//!
//! Objects cross the boundary as opaque handles created by `pg_*_new`-style constructors and
//! released with the matching `pg_*_free`. Every fallible call returns a [`PgStatus`]; on failure
//! the message is kept per thread and read with [`pg_last_error_message`]. Results are written
//! through out-pointers, which are left untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use phigrowth::grid::GridSpec;
use phigrowth::models::{make_example_f, make_example_g, FunctionModel, Poly, Rational};
use phigrowth::nevanlinna::{characteristic_at, lemma_a_check, max_modulus_at, order_estimate, quantity_samples, QuadOptions, Quantity};
use phigrowth::qdiff::{residual, solve_series_with, QDifferenceEquation, SeriesSolution, SolveOptions};
use phigrowth::scales::{growth_params, BuiltinPhi, PhiScale, SScale};
use phigrowth::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InsufficientGrid = 3,
    Unsupported = 4,
    Singularity = 5,
    OutOfRange = 6,
    InconsistentEquation = 7,
    Numerical = 8,
    Panic = 99,
}

impl From<&Error> for PgStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::InvalidInput(_)
            | Error::Domain(_)
            | Error::InadmissibleS(_)
            | Error::Config { .. }
            | Error::Io { .. }
            | Error::Parse(_) => PgStatus::InvalidArgument,
            Error::InsufficientGrid(_) => PgStatus::InsufficientGrid,
            Error::Capability { .. } | Error::ConstructionInapplicable(_) | Error::UnsupportedVariant(_) => PgStatus::Unsupported,
            Error::Singularity { .. } | Error::PoleNearCircle { .. } => PgStatus::Singularity,
            Error::RadiusOutOfRange { .. } => PgStatus::OutOfRange,
            Error::InconsistentEquation { .. } => PgStatus::InconsistentEquation,
            Error::TruncationInsufficient { .. } | Error::NotEntire(_) | Error::UncertifiedRoots(_) => PgStatus::Numerical,
        }
    }
}

/// Built-in growth scales φ.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgPhiKind {
    /// `log r`; the parameter is ignored.
    Log = 0,
    /// `r`; the parameter is ignored.
    Identity = 1,
    /// `(log r)^param`.
    LogPower = 2,
    /// `exp((log r)^param)`.
    ExpLogPower = 3,
    /// `r^param`.
    Power = 4,
}

/// Comparison radius functions s.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgSKind {
    /// `param · r`.
    Linear = 0,
    /// `r^param`.
    Power = 1,
    /// `r log r`; the parameter is ignored.
    RLogR = 2,
    /// `e^r`; the parameter is ignored.
    Exp = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgQuantity {
    /// Nevanlinna characteristic `T(r)`.
    T = 0,
    /// `log⁺ M(r)`.
    LogM = 1,
    /// Zero count `n(r)`.
    SmallN = 2,
    /// Integrated zero count `N(r)`.
    BigN = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgGridKind {
    LogUniform = 0,
    LogLogUniform = 1,
}

/// Radius grid, with both ends given as `log r`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PgGrid {
    pub kind: PgGridKind,
    pub log_r_min: f64,
    pub log_r_max: f64,
    pub points: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PgGrowthParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PgCharacteristic {
    /// Radius actually used; circles too close to a pole are moved outward.
    pub log_r: f64,
    pub m: f64,
    pub big_n_poles: f64,
    pub t: f64,
    pub quadrature_error: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PgLemmaA {
    /// Quadrature value of `m(r, f(qz)/f(z))`.
    pub lhs: f64,
    pub lhs_error: f64,
    pub bound: f64,
    /// `bound − (lhs + lhs_error)`.
    pub margin: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PgResidual {
    /// `max_θ log|Σ a_j(z) f(q^j z) − a_{n+1}(z)|`.
    pub max_log_residual: f64,
    /// `max_θ max_j log|a_j(z) f(q^j z)|`.
    pub log_scale: f64,
}

pub struct PgPhi(PhiScale);
pub struct PgS(SScale);
pub struct PgModel(FunctionModel);
pub struct PgEquation(QDifferenceEquation);
pub struct PgSolution(SeriesSolution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: PgStatus, msg: impl Into<String>) -> PgStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, recording the error message and turning panics into [`PgStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), PgStatus>) -> PgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PgStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(PgStatus::Panic, msg)
        }
    }
}

trait OrStatus<T> {
    fn status(self) -> Result<T, PgStatus>;
}

impl<T> OrStatus<T> for phigrowth::Result<T> {
    fn status(self) -> Result<T, PgStatus> {
        self.map_err(|e| fail(PgStatus::from(&e), e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, PgStatus> {
    p.as_ref().ok_or_else(|| fail(PgStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), PgStatus> {
    if out.is_null() {
        return Err(fail(PgStatus::NullPointer, format!("{what} is null")));
    }
    out.write(v);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], PgStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(PgStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

fn grid_of(g: &PgGrid) -> Result<phigrowth::grid::RadiusGrid, PgStatus> {
    let spec = match g.kind {
        PgGridKind::LogUniform => GridSpec::LogUniform { log_r_min: g.log_r_min, log_r_max: g.log_r_max, points: g.points },
        PgGridKind::LogLogUniform => GridSpec::LogLogUniform { log_r_min: g.log_r_min, log_r_max: g.log_r_max, points: g.points },
    };
    spec.build().status()
}

/// Length of the current thread's last error message, excluding the terminating NUL; 0 if none.
#[no_mangle]
pub extern "C" fn pg_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |c| c.as_bytes().len()))
}

/// Copies the last error message into `buf` (NUL-terminated, truncated to `len − 1` bytes).
/// Returns the full message length.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn pg_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map_or(&[][..], |c| c.as_bytes());
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_phi_new(kind: PgPhiKind, param: f64, out: *mut *mut PgPhi) -> PgStatus {
    guard(|| {
        let phi = match kind {
            PgPhiKind::Log => PhiScale::log(),
            PgPhiKind::Identity => PhiScale::identity(),
            PgPhiKind::LogPower => PhiScale::builtin(BuiltinPhi::LogPower, param).status()?,
            PgPhiKind::ExpLogPower => PhiScale::builtin(BuiltinPhi::ExpLogPower, param).status()?,
            PgPhiKind::Power => PhiScale::builtin(BuiltinPhi::Power, param).status()?,
        };
        put(out, boxed(PgPhi(phi)), "out")
    })
}

/// # Safety
/// `phi` must come from [`pg_phi_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pg_phi_free(phi: *mut PgPhi) {
    free(phi)
}

/// `log φ(r)` at `log r = x`.
///
/// # Safety
/// `phi` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_phi_log_phi(phi: *const PgPhi, x: f64, out: *mut f64) -> PgStatus {
    guard(|| {
        let v = deref(phi, "phi")?.0.log_phi(x);
        if v.is_nan() {
            return Err(fail(PgStatus::InvalidArgument, format!("log r = {x} is outside the domain of φ")));
        }
        put(out, v, "out")
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_s_new(kind: PgSKind, param: f64, out: *mut *mut PgS) -> PgStatus {
    guard(|| {
        let s = match kind {
            PgSKind::Linear => SScale::linear(param).status()?,
            PgSKind::Power => SScale::power(param).status()?,
            PgSKind::RLogR => SScale::r_log_r(),
            PgSKind::Exp => SScale::exp(),
        };
        put(out, boxed(PgS(s)), "out")
    })
}

/// # Safety
/// `s` must come from [`pg_s_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pg_s_free(s: *mut PgS) {
    free(s)
}

/// Growth parameters α, β, γ of the pair `(φ, s)` from the tail of `grid`.
///
/// # Safety
/// Handles must be live; `grid` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pg_growth_params(phi: *const PgPhi, s: *const PgS, grid: *const PgGrid, out: *mut PgGrowthParams) -> PgStatus {
    guard(|| {
        let g = grid_of(deref(grid, "grid")?)?;
        let p = growth_params(&deref(phi, "phi")?.0, &deref(s, "s")?.0, &g).status()?;
        put(out, PgGrowthParams { alpha: p.alpha, beta: p.beta, gamma: p.gamma }, "out")
    })
}

/// Polynomial `Σ c_k z^k`. `im` may be null for real coefficients.
///
/// # Safety
/// `re` (and `im` if non-null) must hold `len` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_model_polynomial(re: *const f64, im: *const f64, len: usize, out: *mut *mut PgModel) -> PgStatus {
    guard(|| {
        let re = slice(re, len, "re")?;
        let coeffs: Vec<Complex64> = if im.is_null() {
            re.iter().map(|&x| Complex64::new(x, 0.0)).collect()
        } else {
            re.iter().zip(slice(im, len, "im")?).map(|(&x, &y)| Complex64::new(x, y)).collect()
        };
        let r = Rational::new(Poly::new(coeffs), Poly::constant(Complex64::new(1.0, 0.0))).status()?;
        put(out, boxed(PgModel(FunctionModel::Rational(r))), "out")
    })
}

/// Rational function with real coefficient lists, lowest degree first.
///
/// # Safety
/// `numer` and `denom` must hold `n_numer` and `n_denom` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_model_rational(
    numer: *const f64,
    n_numer: usize,
    denom: *const f64,
    n_denom: usize,
    out: *mut *mut PgModel,
) -> PgStatus {
    guard(|| {
        let m = FunctionModel::rational(slice(numer, n_numer, "numer")?, slice(denom, n_denom, "denom")?).status()?;
        put(out, boxed(PgModel(m)), "out")
    })
}

/// Canonical product with zeros `|z_n| = φ⁻¹(n^{1/κ})`.
///
/// # Safety
/// `phi` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_model_example_f(phi: *const PgPhi, kappa: f64, out: *mut *mut PgModel) -> PgStatus {
    guard(|| {
        let m = make_example_f(deref(phi, "phi")?.0.clone(), kappa).status()?;
        put(out, boxed(PgModel(m)), "out")
    })
}

/// Canonical product with zeros `|z_n| = φ⁻¹(c^n)`.
///
/// # Safety
/// `phi` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_model_example_g(phi: *const PgPhi, c: f64, out: *mut *mut PgModel) -> PgStatus {
    guard(|| {
        let m = make_example_g(deref(phi, "phi")?.0.clone(), c).status()?;
        put(out, boxed(PgModel(m)), "out")
    })
}

/// # Safety
/// `model` must come from a `pg_model_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pg_model_free(model: *mut PgModel) {
    free(model)
}

/// `T(r, f) = m(r, f) + N(r, f)` at `log r = x`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_model_characteristic(model: *const PgModel, x: f64, out: *mut PgCharacteristic) -> PgStatus {
    guard(|| {
        let s = characteristic_at(&deref(model, "model")?.0, x, &QuadOptions::default()).status()?;
        let c = PgCharacteristic { log_r: s.log_r, m: s.m, big_n_poles: s.big_n_poles, t: s.t, quadrature_error: s.quadrature_error };
        put(out, c, "out")
    })
}

/// `log M(r, f)` at `log r = x`, with the maximizing argument in `theta` (may be null).
///
/// # Safety
/// `model` must be a live handle; `log_m` valid for writes, `theta` valid or null.
#[no_mangle]
pub unsafe extern "C" fn pg_model_max_modulus(model: *const PgModel, x: f64, log_m: *mut f64, theta: *mut f64) -> PgStatus {
    guard(|| {
        let (v, t) = max_modulus_at(&deref(model, "model")?.0, x).status()?;
        put(log_m, v, "log_m")?;
        if !theta.is_null() {
            theta.write(t);
        }
        Ok(())
    })
}

/// φ-order of `quantity` fitted over `grid`. `infinite` (may be null) is set when the fit
/// diagnoses infinite order.
///
/// # Safety
/// Handles must be live; `grid` and `rho` valid, `infinite` valid or null.
#[no_mangle]
pub unsafe extern "C" fn pg_model_order(
    model: *const PgModel,
    phi: *const PgPhi,
    quantity: PgQuantity,
    grid: *const PgGrid,
    rho: *mut f64,
    infinite: *mut bool,
) -> PgStatus {
    guard(|| {
        let (m, phi) = (&deref(model, "model")?.0, &deref(phi, "phi")?.0);
        let g = grid_of(deref(grid, "grid")?)?;
        let quantity = match quantity {
            PgQuantity::T => Quantity::T,
            PgQuantity::LogM => Quantity::LogM,
            PgQuantity::SmallN => Quantity::SmallN,
            PgQuantity::BigN => Quantity::BigN,
        };
        let samples = quantity_samples(m, &g, quantity, &QuadOptions::default()).status()?;
        let est = order_estimate(&samples, phi, quantity).status()?;
        put(rho, est.rho, "rho")?;
        if !infinite.is_null() {
            infinite.write(est.infinite);
        }
        Ok(())
    })
}

/// Logarithmic q-difference `m(r, f(qz)/f(z))` against its upper bound.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_lemma_a_check(
    model: *const PgModel,
    r: f64,
    lambda: f64,
    q_re: f64,
    q_im: f64,
    delta: f64,
    out: *mut PgLemmaA,
) -> PgStatus {
    guard(|| {
        let c = lemma_a_check(&deref(model, "model")?.0, r, lambda, Complex64::new(q_re, q_im), delta, &QuadOptions::default())
            .status()?;
        put(out, PgLemmaA { lhs: c.lhs, lhs_error: c.lhs_error, bound: c.bound.total, margin: c.margin }, "out")
    })
}

/// `Σ_{j<n} a_j(z) f(q^j z) = rhs(z)` with `n = n_coeffs`. A null `rhs` means the zero function.
/// The models are copied; the caller keeps ownership of its handles.
///
/// # Safety
/// `coeffs` must hold `n_coeffs` live model handles; `rhs` live or null; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_equation_new(
    q_re: f64,
    q_im: f64,
    coeffs: *const *const PgModel,
    n_coeffs: usize,
    rhs: *const PgModel,
    out: *mut *mut PgEquation,
) -> PgStatus {
    guard(|| {
        let models = slice(coeffs, n_coeffs, "coeffs")?
            .iter()
            .enumerate()
            .map(|(j, &m)| deref(m, &format!("coeffs[{j}]")).map(|m| m.0.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let rhs = if rhs.is_null() { FunctionModel::polynomial(&[0.0]) } else { deref(rhs, "rhs")?.0.clone() };
        let eq = QDifferenceEquation::new(Complex64::new(q_re, q_im), models, rhs).status()?;
        put(out, boxed(PgEquation(eq)), "out")
    })
}

/// # Safety
/// `eq` must come from [`pg_equation_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pg_equation_free(eq: *mut PgEquation) {
    free(eq)
}

/// Power-series solution `c_0..c_K` with `K = truncation`. `precision_bits = 0` selects the
/// default precision for `K` and `|q|`.
///
/// # Safety
/// `eq` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_solve(eq: *const PgEquation, truncation: usize, precision_bits: u32, out: *mut *mut PgSolution) -> PgStatus {
    guard(|| {
        let opts = SolveOptions { precision: (precision_bits > 0).then_some(precision_bits), auto_raise: true };
        let sol = solve_series_with(&deref(eq, "eq")?.0, truncation, None, &opts).status()?;
        put(out, boxed(PgSolution(sol)), "out")
    })
}

/// # Safety
/// `sol` must come from [`pg_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_free(sol: *mut PgSolution) {
    free(sol)
}

/// Number of stored coefficients (`K + 1`, or fewer for a terminating solution); 0 for null.
///
/// # Safety
/// `sol` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_len(sol: *const PgSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.0.coeffs.len())
}

/// Working precision of the solution in bits; 0 for null.
///
/// # Safety
/// `sol` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_precision(sol: *const PgSolution) -> u32 {
    sol.as_ref().map_or(0, |s| s.0.precision)
}

/// `c_k` rounded to double precision.
///
/// # Safety
/// `sol` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_coeff(sol: *const PgSolution, k: usize, re: *mut f64, im: *mut f64) -> PgStatus {
    guard(|| {
        let s = &deref(sol, "sol")?.0;
        let c = s.coeffs.get(k).ok_or_else(|| fail(PgStatus::OutOfRange, format!("k = {k} past the last coefficient {}", s.coeffs.len())))?;
        put(re, c.real().to_f64(), "re")?;
        put(im, c.imag().to_f64(), "im")
    })
}

/// `log|c_k|` at full precision, so values far below the double range stay usable.
///
/// # Safety
/// `sol` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_log_abs_coeff(sol: *const PgSolution, k: usize, out: *mut f64) -> PgStatus {
    guard(|| {
        let s = &deref(sol, "sol")?.0;
        if k >= s.coeffs.len() {
            return Err(fail(PgStatus::OutOfRange, format!("k = {k} past the last coefficient {}", s.coeffs.len())));
        }
        put(out, s.log_abs_coeff(k), "out")
    })
}

/// Residual of `eq` at the solution on the circle `log r = x`, sampled at `thetas` points.
///
/// # Safety
/// Handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_residual(
    eq: *const PgEquation,
    sol: *const PgSolution,
    x: f64,
    thetas: usize,
    out: *mut PgResidual,
) -> PgStatus {
    guard(|| {
        let g = phigrowth::grid::RadiusGrid::new(vec![x]).status()?;
        let rep = residual(&deref(eq, "eq")?.0, &deref(sol, "sol")?.0, &g, thetas).status()?;
        let row = &rep.rows[0];
        put(out, PgResidual { max_log_residual: row.max_log_residual, log_scale: row.log_scale }, "out")
    })
}

/// The solution as a power-series model, for the model functions above.
///
/// # Safety
/// `sol` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pg_solution_model(sol: *const PgSolution, out: *mut *mut PgModel) -> PgStatus {
    guard(|| {
        let m = deref(sol, "sol")?.0.to_model().status()?;
        put(out, boxed(PgModel(m)), "out")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_error_variant_maps_to_a_nonzero_status() {
        let errs = [
            Error::InvalidParameter(String::new()),
            Error::InsufficientGrid(String::new()),
            Error::UnsupportedVariant(String::new()),
            Error::Singularity { log_r: 0.0 },
            Error::RadiusOutOfRange { log_r: 0.0, max_log_r: 0.0 },
            Error::InconsistentEquation { index: 0 },
            Error::TruncationInsufficient { achieved: 0.0, requested: 0.0 },
        ];
        for e in &errs {
            assert_ne!(PgStatus::from(e), PgStatus::Ok);
        }
    }

    #[test]
    fn panics_are_caught() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, PgStatus::Panic);
        assert_eq!(pg_last_error_length(), 4);
    }

    #[test]
    fn success_clears_the_last_error() {
        let _ = guard(|| Err(fail(PgStatus::InvalidArgument, "x")));
        assert_eq!(pg_last_error_length(), 1);
        let _ = guard(|| Ok(()));
        assert_eq!(pg_last_error_length(), 0);
    }
}
