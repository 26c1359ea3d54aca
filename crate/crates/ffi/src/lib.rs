//! C ABI for `hypq`.
//!
//! Every fallible function returns a [`HypqStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and can
//! be read with [`hypq_last_error`]. Coefficient sequences and identity
//! reports are opaque handles released with their `_free` function; strings
//! handed out by the library are released with [`hypq_string_free`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hypq::report::{write_identity_report, Format};
use hypq::series::hyp2f1;
use hypq::transforms::{random_grid, GridSpec};
use hypq::{
    check_identity, closed_form_coeffs, fit_connection_constants, lhs_eval, ode_from_case, ode_residual,
    parse_rational, recurrence_coeffs, rhs_eval, series_eval, Branch, ClosedFormCase, CoeffSeq, HypError,
    IdentityReport, OdeSpec, Rational, Scalar, SeriesControl, TransformCase,
};

pub const HYPQ_CASE_GAUSS: i32 = 0;
pub const HYPQ_CASE_PLUS_ONE: i32 = 1;
pub const HYPQ_CASE_MINUS_ONE: i32 = 2;

pub const HYPQ_BRANCH_ANALYTIC: i32 = 0;
pub const HYPQ_BRANCH_SINGULAR: i32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypqStatus {
    Ok = 0,
    InvalidParams = 1,
    DomainError = 2,
    NotConverged = 3,
    ResonantExponent = 4,
    NotIndicialRoot = 5,
    PoleInCoefficients = 6,
    IllConditioned = 7,
    Parse = 8,
    NullPointer = 9,
    Panic = 10,
}

/// Series truncation controls. Pass NULL wherever one is accepted to get the defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypqSeriesControl {
    pub max_terms: usize,
    pub rel_tol: f64,
    pub consecutive_small: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HypqConnection {
    pub coef_a: f64,
    pub coef_b: f64,
    pub residual: f64,
    pub condition: f64,
}

/// Exact Frobenius coefficients together with the ODE they solve.
pub struct HypqCoeffs {
    ode: OdeSpec<Rational>,
    seq: CoeffSeq<Rational>,
}

pub struct HypqReport {
    report: IdentityReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail {
    status: HypqStatus,
    message: String,
}

impl Fail {
    fn new(status: HypqStatus, message: impl Into<String>) -> Self {
        Self { status, message: message.into() }
    }
}

impl From<HypError> for Fail {
    fn from(e: HypError) -> Self {
        let status = match e {
            HypError::InvalidParams(_) => HypqStatus::InvalidParams,
            HypError::DomainError(_) => HypqStatus::DomainError,
            HypError::NotConverged { .. } => HypqStatus::NotConverged,
            HypError::ResonantExponent(_) => HypqStatus::ResonantExponent,
            HypError::NotIndicialRoot { .. } => HypqStatus::NotIndicialRoot,
            HypError::PoleInCoefficients(_) => HypqStatus::PoleInCoefficients,
            HypError::IllConditioned { .. } => HypqStatus::IllConditioned,
            HypError::Parse(_) => HypqStatus::Parse,
        };
        Fail::new(status, e.to_string())
    }
}

type FfiResult = Result<(), Fail>;

fn guard(f: impl FnOnce() -> FfiResult) -> HypqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HypqStatus::Ok,
        Ok(Err(e)) => {
            set_last_error(e.message);
            e.status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            HypqStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail::new(HypqStatus::NullPointer, format!("{name} is NULL")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::new(HypqStatus::NullPointer, format!("{name} is NULL")))
}

unsafe fn c_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::new(HypqStatus::NullPointer, format!("{name} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::new(HypqStatus::Parse, format!("{name} is not valid UTF-8")))
}

unsafe fn rational_arg(p: *const c_char, name: &str) -> Result<Rational, Fail> {
    Ok(parse_rational(c_str(p, name)?)?)
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn case_arg(case: i32) -> Result<TransformCase, Fail> {
    match case {
        HYPQ_CASE_GAUSS => Ok(TransformCase::Gauss),
        HYPQ_CASE_PLUS_ONE => Ok(TransformCase::PlusOne),
        HYPQ_CASE_MINUS_ONE => Ok(TransformCase::MinusOne),
        _ => Err(Fail::new(HypqStatus::InvalidParams, format!("unknown case {case}"))),
    }
}

fn branch_arg(branch: i32) -> Result<Branch, Fail> {
    match branch {
        HYPQ_BRANCH_ANALYTIC => Ok(Branch::Analytic),
        HYPQ_BRANCH_SINGULAR => Ok(Branch::Singular),
        _ => Err(Fail::new(HypqStatus::InvalidParams, format!("unknown branch {branch}"))),
    }
}

unsafe fn control_arg(ctl: *const HypqSeriesControl) -> Result<SeriesControl, Fail> {
    match ctl.as_ref() {
        None => Ok(SeriesControl::default()),
        Some(c) => Ok(SeriesControl::new(c.max_terms, c.rel_tol, c.consecutive_small)?),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hypq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or NULL. Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hypq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn hypq_series_control_default() -> HypqSeriesControl {
    let d = SeriesControl::default();
    HypqSeriesControl {
        max_terms: d.max_terms,
        rel_tol: d.rel_tol,
        consecutive_small: d.consecutive_small,
    }
}

/// ₂F₁(a, b; c; z).
///
/// # Safety
/// `ctl` is NULL or valid; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_hyp2f1(
    a: f64,
    b: f64,
    c: f64,
    z: f64,
    ctl: *const HypqSeriesControl,
    out: *mut f64,
) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = hyp2f1(a, b, c, z, &control_arg(ctl)?)?;
        Ok(())
    })
}

/// Left-hand side (1+x)^{-2a} ₂F₁(a, b; 2b+shift; 4x/(1+x)²) of the selected case.
///
/// # Safety
/// `ctl` is NULL or valid; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_lhs(
    case_: i32,
    a: f64,
    b: f64,
    x: f64,
    ctl: *const HypqSeriesControl,
    out: *mut f64,
) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = lhs_eval(case_arg(case_)?, a, b, x, &control_arg(ctl)?)?;
        Ok(())
    })
}

/// Right-hand side series in x² of the selected case.
///
/// # Safety
/// `ctl` is NULL or valid; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_rhs(
    case_: i32,
    a: f64,
    b: f64,
    x: f64,
    ctl: *const HypqSeriesControl,
    out: *mut f64,
) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = rhs_eval(case_arg(case_)?, a, b, x, &control_arg(ctl)?)?;
        Ok(())
    })
}

/// Recurrence coefficients c_0..c_{n_max} (c_0 = 1) at the indicial root `lambda`.
/// `a`, `b` and `lambda` are decimal or "p/q" strings, converted exactly.
///
/// # Safety
/// String arguments are NUL-terminated; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_coeffs_recurrence(
    case_: i32,
    a: *const c_char,
    b: *const c_char,
    lambda: *const c_char,
    n_max: usize,
    out: *mut *mut HypqCoeffs,
) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let case = case_arg(case_)?;
        let (a, b) = (rational_arg(a, "a")?, rational_arg(b, "b")?);
        let lambda = rational_arg(lambda, "lambda")?;
        let ode = ode_from_case(case, &a, &b);
        let seq = recurrence_coeffs(&ode, &lambda, n_max, &Rational::from_i64(1))?;
        *out = Box::into_raw(Box::new(HypqCoeffs { ode, seq }));
        Ok(())
    })
}

/// Closed-form coefficients c_0..c_{n_max} for `case`/`branch`.
///
/// # Safety
/// String arguments are NUL-terminated; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_coeffs_closed_form(
    case_: i32,
    branch: i32,
    a: *const c_char,
    b: *const c_char,
    n_max: usize,
    out: *mut *mut HypqCoeffs,
) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let case = case_arg(case_)?;
        let cf = ClosedFormCase::new(case, branch_arg(branch)?);
        let (a, b) = (rational_arg(a, "a")?, rational_arg(b, "b")?);
        let seq = closed_form_coeffs(cf, &a, &b, n_max)?;
        let ode = ode_from_case(case, &a, &b);
        *out = Box::into_raw(Box::new(HypqCoeffs { ode, seq }));
        Ok(())
    })
}

/// Number of stored coefficients (n_max + 1).
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_coeffs_len(h: *const HypqCoeffs, out: *mut usize) -> HypqStatus {
    guard(|| {
        *out_ref(out, "out")? = handle(h, "h")?.seq.coeffs.len();
        Ok(())
    })
}

/// Coefficient `i` rounded to double.
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_coeffs_get(h: *const HypqCoeffs, i: usize, out: *mut f64) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let c = coeff_at(handle(h, "h")?, i)?;
        *out = c.to_f64();
        Ok(())
    })
}

/// Coefficient `i` as an exact "p/q" string. Free with `hypq_string_free`.
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_coeffs_get_string(h: *const HypqCoeffs, i: usize, out: *mut *mut c_char) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = to_c_string(coeff_at(handle(h, "h")?, i)?.to_string());
        Ok(())
    })
}

fn coeff_at(h: &HypqCoeffs, i: usize) -> Result<&Rational, Fail> {
    h.seq.coeffs.get(i).ok_or_else(|| {
        Fail::new(
            HypqStatus::InvalidParams,
            format!("index {i} out of range (len {})", h.seq.coeffs.len()),
        )
    })
}

/// The exponent λ as an exact string. Free with `hypq_string_free`.
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_coeffs_lambda_string(h: *const HypqCoeffs, out: *mut *mut c_char) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = to_c_string(handle(h, "h")?.seq.lambda.to_string());
        Ok(())
    })
}

/// Exact equality of exponent and every coefficient.
///
/// # Safety
/// `x` and `y` are live handles; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_coeffs_equal(x: *const HypqCoeffs, y: *const HypqCoeffs, out: *mut bool) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = handle(x, "x")?.seq == handle(y, "y")?.seq;
        Ok(())
    })
}

/// x^λ Σ cₙxⁿ at `x`.
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_coeffs_eval(h: *const HypqCoeffs, x: f64, out: *mut f64) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = series_eval(&handle(h, "h")?.seq, x)?;
        Ok(())
    })
}

/// ODE residual of the truncated series at `x`, divided by its largest term.
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_coeffs_residual(h: *const HypqCoeffs, x: f64, out: *mut f64) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let h = handle(h, "h")?;
        *out = ode_residual(&h.ode, &h.seq, x)?.relative();
        Ok(())
    })
}

/// # Safety
/// `h` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hypq_coeffs_free(h: *mut HypqCoeffs) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Seeded identity suite over `samples` random points with |x| ≤ 0.6.
///
/// # Safety
/// `ctl` is NULL or valid; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_check_identity(
    case_: i32,
    samples: usize,
    seed: u64,
    tol: f64,
    ctl: *const HypqSeriesControl,
    out: *mut *mut HypqReport,
) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let case = case_arg(case_)?;
        let ctl = control_arg(ctl)?;
        if samples == 0 {
            return Err(Fail::new(HypqStatus::InvalidParams, "samples must be at least 1"));
        }
        if !(tol > 0.0) {
            return Err(Fail::new(HypqStatus::InvalidParams, format!("tol must be positive, got {tol}")));
        }
        let grid = random_grid(case, samples, seed, &GridSpec::default());
        let mut report = check_identity(case, &grid, tol, &ctl);
        report.seed = Some(seed);
        *out = Box::into_raw(Box::new(HypqReport { report }));
        Ok(())
    })
}

/// Pass, fail and skipped counts. Any out-pointer may be NULL.
///
/// # Safety
/// `h` is a live handle; non-NULL out-pointers are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_report_counts(
    h: *const HypqReport,
    n_pass: *mut usize,
    n_fail: *mut usize,
    n_skipped: *mut usize,
) -> HypqStatus {
    guard(|| {
        let r = &handle(h, "h")?.report;
        if let Some(p) = n_pass.as_mut() {
            *p = r.n_pass;
        }
        if let Some(p) = n_fail.as_mut() {
            *p = r.n_fail;
        }
        if let Some(p) = n_skipped.as_mut() {
            *p = r.skipped.len();
        }
        Ok(())
    })
}

/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_report_max_rel_err(h: *const HypqReport, out: *mut f64) -> HypqStatus {
    guard(|| {
        *out_ref(out, "out")? = handle(h, "h")?.report.max_rel_err();
        Ok(())
    })
}

/// The report in the CLI's JSON schema. Free with `hypq_string_free`.
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_report_to_json(h: *const HypqReport, out: *mut *mut c_char) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let mut buf = Vec::new();
        write_identity_report(&handle(h, "h")?.report, Format::Json, &mut buf)
            .map_err(|e| Fail::new(HypqStatus::InvalidParams, e.to_string()))?;
        *out = to_c_string(String::from_utf8_lossy(&buf).into_owned());
        Ok(())
    })
}

/// # Safety
/// `h` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hypq_report_free(h: *mut HypqReport) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Least-squares connection constants from `n_xs` points in (0, 1).
///
/// # Safety
/// `xs` points to `n_xs` doubles; `ctl` is NULL or valid; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hypq_fit(
    case_: i32,
    a: f64,
    b: f64,
    xs: *const f64,
    n_xs: usize,
    ctl: *const HypqSeriesControl,
    out: *mut HypqConnection,
) -> HypqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let case = case_arg(case_)?;
        if xs.is_null() && n_xs > 0 {
            return Err(Fail::new(HypqStatus::NullPointer, "xs is NULL"));
        }
        let xs = if n_xs == 0 { &[][..] } else { std::slice::from_raw_parts(xs, n_xs) };
        let k = fit_connection_constants(case, a, b, xs, &control_arg(ctl)?)?;
        *out = HypqConnection {
            coef_a: k.coef_a,
            coef_b: k.coef_b,
            residual: k.residual,
            condition: k.condition,
        };
        Ok(())
    })
}

/// # Safety
/// `s` is NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hypq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
