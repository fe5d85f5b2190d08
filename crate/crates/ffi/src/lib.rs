//! C ABI for `hsca-core`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` or
//! `*_from_json` functions and released by the matching `*_free`. Every
//! fallible call returns an [`HscaStatus`]; the message of the last failure on
//! the calling thread is available from [`hsca_last_error`]. Strings returned
//! to the caller are owned by the caller and released with
//! [`hsca_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hsca_core::fundamental::{FundamentalKind as CoreKind, FundamentalSolution};
use hsca_core::harmonic::{almansi_split, check_harmonic};
use hsca_core::operators::SpinContext;
use hsca_core::poly::{CliffPoly, PointM};
use hsca_core::poly_json;
use hsca_core::rational::Rational;
use hsca_core::verify::{run_suites, Report, Suite, SuiteConfig};
use hsca_core::HscaError;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HscaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    UnknownSuite = 5,
    Unsupported = 6,
    Singular = 7,
    Io = 8,
    Panic = 9,
}

/// Which fundamental solution to build.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HscaFundamentalKind {
    /// Annihilated by the Rarita-Schwinger operator.
    E = 0,
    /// Annihilated by the dual operator on the `u M_{k-1}` summand.
    F = 1,
    /// Annihilated by the bosonic Laplacian.
    H = 2,
}

/// Verification settings.
pub struct HscaConfig {
    inner: SuiteConfig,
}

/// A finished verification report.
pub struct HscaReport {
    inner: Report,
}

/// A rational Clifford-valued polynomial in `x` and `u`.
pub struct HscaPoly {
    inner: CliffPoly<Rational>,
}

/// A closed-form fundamental solution for fixed `(m, k)`.
pub struct HscaFundamental {
    inner: FundamentalSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &HscaError) -> HscaStatus {
    match err {
        HscaError::Parse(_) => HscaStatus::Parse,
        HscaError::UnknownSuite(_) => HscaStatus::UnknownSuite,
        HscaError::UnsupportedDimension(_) | HscaError::UnsupportedParams { .. } => HscaStatus::Unsupported,
        HscaError::Singular => HscaStatus::Singular,
        HscaError::Io(_) => HscaStatus::Io,
        _ => HscaStatus::InvalidArgument,
    }
}

struct Failure(HscaStatus, String);

impl From<HscaError> for Failure {
    fn from(e: HscaError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(HscaStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HscaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HscaStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            HscaStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(HscaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn handle_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Failure(HscaStatus::InvalidArgument, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hsca_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hsca_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hsca_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default settings: all suites, `m = 3,4,5`, `k = 1,2`, seed 42.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn hsca_config_new(out: *mut *mut HscaConfig) -> HscaStatus {
    guard(|| put(out, HscaConfig { inner: SuiteConfig::default() }))
}

/// # Safety
/// `cfg` must be null or a handle from [`hsca_config_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hsca_config_free(cfg: *mut HscaConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Selects suites from a comma-separated list of names or `all`.
///
/// # Safety
/// `cfg` must be a live config handle and `suites` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hsca_config_set_suites(cfg: *mut HscaConfig, suites: *const c_char) -> HscaStatus {
    guard(|| {
        let cfg = handle_mut(cfg, "config")?;
        let mut list = Vec::new();
        for name in str_arg(suites, "suites")?.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            for s in Suite::parse_list(name)? {
                if !list.contains(&s) {
                    list.push(s);
                }
            }
        }
        cfg.inner.suites = list;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live config handle; `ms` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn hsca_config_set_m(cfg: *mut HscaConfig, ms: *const usize, len: usize) -> HscaStatus {
    guard(|| {
        let list = slice_arg(ms, len, "m list")?.to_vec();
        handle_mut(cfg, "config")?.inner.m_list = list;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live config handle; `ks` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn hsca_config_set_k(cfg: *mut HscaConfig, ks: *const usize, len: usize) -> HscaStatus {
    guard(|| {
        let list = slice_arg(ks, len, "k list")?.to_vec();
        handle_mut(cfg, "config")?.inner.k_list = list;
        Ok(())
    })
}

/// Sets the sample count, largest `x`-degree, seed, float tolerance and
/// worker count (`0` = all cores) in one call.
///
/// # Safety
/// `cfg` must be a live config handle.
#[no_mangle]
pub unsafe extern "C" fn hsca_config_set_params(
    cfg: *mut HscaConfig,
    samples: usize,
    xdeg: usize,
    seed: u64,
    tol: f64,
    workers: usize,
) -> HscaStatus {
    guard(|| {
        let c = &mut handle_mut(cfg, "config")?.inner;
        c.samples = samples;
        c.xdeg = xdeg;
        c.seed = seed;
        c.tol = tol;
        c.workers = workers;
        Ok(())
    })
}

/// Runs the configured suites.
///
/// # Safety
/// `cfg` must be a live config handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hsca_run(cfg: *const HscaConfig, out: *mut *mut HscaReport) -> HscaStatus {
    guard(|| {
        let report = run_suites(&handle(cfg, "config")?.inner)?;
        put(out, HscaReport { inner: report })
    })
}

/// # Safety
/// `report` must be null or a handle from [`hsca_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hsca_report_free(report: *mut HscaReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Entry counts by status. Any output pointer may be null.
///
/// # Safety
/// `report` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn hsca_report_counts(
    report: *const HscaReport,
    pass: *mut usize,
    fail: *mut usize,
    skip: *mut usize,
) -> HscaStatus {
    guard(|| {
        let s = &handle(report, "report")?.inner.summary;
        for (p, v) in [(pass, s.pass), (fail, s.fail), (skip, s.skip)] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// `0` when no entry failed, `1` otherwise; `-1` for a null handle.
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn hsca_report_exit_code(report: *const HscaReport) -> i32 {
    report.as_ref().map_or(-1, |r| r.inner.exit_code())
}

/// The report as pretty JSON; `canonical` zeroes all timings.
///
/// # Safety
/// `report` must be a live report handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hsca_report_to_json(
    report: *const HscaReport,
    canonical: bool,
    out: *mut *mut c_char,
) -> HscaStatus {
    guard(|| {
        let r = &handle(report, "report")?.inner;
        let json = if canonical { r.canonical().to_json() } else { r.to_json() };
        put_string(out, json)
    })
}

/// Parses a polynomial from its JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hsca_poly_from_json(json: *const c_char, out: *mut *mut HscaPoly) -> HscaStatus {
    guard(|| {
        let p = poly_json::from_json::<Rational>(str_arg(json, "json")?)?;
        put(out, HscaPoly { inner: p })
    })
}

/// # Safety
/// `poly` must be a live polynomial handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hsca_poly_to_json(poly: *const HscaPoly, out: *mut *mut c_char) -> HscaStatus {
    guard(|| put_string(out, poly_json::to_json(&handle(poly, "poly")?.inner)))
}

/// # Safety
/// `poly` must be null or a live polynomial handle.
#[no_mangle]
pub unsafe extern "C" fn hsca_poly_free(poly: *mut HscaPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Splits a `u`-harmonic field of degree `k` into its monogenic part and the
/// `u M_{k-1}` part.
///
/// # Safety
/// `poly` must be a live polynomial handle; `plus` and `minus` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hsca_poly_almansi_split(
    poly: *const HscaPoly,
    k: usize,
    plus: *mut *mut HscaPoly,
    minus: *mut *mut HscaPoly,
) -> HscaStatus {
    guard(|| {
        if plus.is_null() || minus.is_null() {
            return Err(null("output pointer"));
        }
        let pair = almansi_split(&handle(poly, "poly")?.inner, k)?;
        put(plus, HscaPoly { inner: pair.f1 })?;
        put(minus, HscaPoly { inner: pair.f2 })
    })
}

/// Applies the bosonic Laplacian of degree `k` in its direct second-order form.
///
/// # Safety
/// `poly` must be a live polynomial handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hsca_poly_bosonic_laplacian(
    poly: *const HscaPoly,
    k: usize,
    out: *mut *mut HscaPoly,
) -> HscaStatus {
    guard(|| {
        let p = &handle(poly, "poly")?.inner;
        check_harmonic(p, k)?;
        let ctx = SpinContext::new(p.dim(), k)?;
        put(out, HscaPoly { inner: ctx.laplacian_direct_poly(p) })
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hsca_fundamental_new(
    kind: HscaFundamentalKind,
    m: usize,
    k: usize,
    out: *mut *mut HscaFundamental,
) -> HscaStatus {
    guard(|| {
        let kind = match kind {
            HscaFundamentalKind::E => CoreKind::E,
            HscaFundamentalKind::F => CoreKind::F,
            HscaFundamentalKind::H => CoreKind::H,
        };
        put(out, HscaFundamental { inner: FundamentalSolution::new(kind, m, k)? })
    })
}

/// # Safety
/// `sol` must be null or a live fundamental-solution handle.
#[no_mangle]
pub unsafe extern "C" fn hsca_fundamental_free(sol: *mut HscaFundamental) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

unsafe fn point(sol: &FundamentalSolution, x: *const f64, v: *const f64, len: usize) -> Result<PointM, Failure> {
    if len != sol.m {
        return Err(HscaError::DimensionMismatch { left: sol.m, right: len }.into());
    }
    let x = slice_arg(x, len, "x")?.to_vec();
    let v = slice_arg(v, len, "v")?.to_vec();
    Ok(PointM { x, u: None, v: Some(v) })
}

/// Relative residual of the matching operator applied to the solution at
/// `x` (with `0.5 <= |x| <= 2`) for second variable `v`; both have `len = m`
/// entries.
///
/// # Safety
/// `sol` must be a live handle, `x` and `v` point to `len` values, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hsca_fundamental_residual(
    sol: *const HscaFundamental,
    x: *const f64,
    v: *const f64,
    len: usize,
    out: *mut f64,
) -> HscaStatus {
    guard(|| {
        let sol = &handle(sol, "solution")?.inner;
        let r = sol.residual(&point(sol, x, v, len)?)?;
        *out.as_mut().ok_or_else(|| null("output pointer"))? = r;
        Ok(())
    })
}

/// The solution at `(x, v)` as a JSON document of a float polynomial in `u`.
///
/// # Safety
/// `sol` must be a live handle, `x` and `v` point to `len` values, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hsca_fundamental_eval_json(
    sol: *const HscaFundamental,
    x: *const f64,
    v: *const f64,
    len: usize,
    out: *mut *mut c_char,
) -> HscaStatus {
    guard(|| {
        let sol = &handle(sol, "solution")?.inner;
        let value = sol.eval(&point(sol, x, v, len)?)?;
        let terms: Vec<serde_json::Value> = value
            .terms()
            .iter()
            .map(|t| {
                serde_json::json!({
                    "u": t.mono.u.to_vec(sol.m),
                    "blade": t.blade.indices(),
                    "coeff": t.coeff,
                })
            })
            .collect();
        put_string(out, serde_json::json!({ "dim": sol.m, "terms": terms }).to_string())
    })
}
