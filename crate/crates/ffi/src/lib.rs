//! C ABI over `lct_core`.
//!
//! Ideals and certificates are opaque heap handles released with their
//! `_free` function. Every fallible call returns an [`LctStatus`]; on failure
//! [`lct_last_error`] describes the problem. Strings returned to the caller
//! are NUL-terminated UTF-8 and must be released with [`lct_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lct_core::charp::{fpt_lower_check_with, nu_with, CharpError, NuOptions, DEFAULT_BUDGET};
use lct_core::curves::{curve_lct, CurveError, CurveMethod};
use lct_core::rational::format_rational;
use lct_core::report::{certificate_json, curve_report_json};
use lct_core::{compute_lct, parse_ideal, IdealSpec};

/// Status codes. Values 0 to 4 coincide with the `lct` exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LctStatus {
    Ok = 0,
    /// A check that must hold did not.
    Failure = 1,
    InvalidInput = 2,
    /// The result is valid but only an upper bound.
    UpperBound = 3,
    BudgetExceeded = 4,
    NullPointer = 5,
    /// Input is well formed but the operation does not apply to it.
    Precondition = 6,
    Internal = 7,
}

/// A validated ideal.
pub struct LctIdeal {
    spec: IdealSpec,
}

/// The result of [`lct_ideal_compute`].
pub struct LctCertificate {
    cert: lct_core::LctCertificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(LctStatus, String);

type Outcome<T> = Result<T, Failure>;

fn fail<T>(status: LctStatus, message: impl Into<String>) -> Outcome<T> {
    Err(Failure(status, message.into()))
}

/// Runs `body`, records any error, and turns panics into `Internal`.
fn guard(body: impl FnOnce() -> Outcome<LctStatus>) -> LctStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error");
            LctStatus::Internal
        }
    }
}

fn charp_status(e: &CharpError) -> LctStatus {
    match e {
        CharpError::NotPrime(_) | CharpError::ZeroExponent => LctStatus::InvalidInput,
        CharpError::BudgetExceeded { .. } | CharpError::TooLarge(_) => LctStatus::BudgetExceeded,
        CharpError::CoefficientDivisible { .. }
        | CharpError::NotExact
        | CharpError::ModulusMismatch { .. } => LctStatus::Precondition,
        CharpError::MixedModulus(..) => LctStatus::Internal,
    }
}

fn charp_failure(e: CharpError) -> Failure {
    Failure(charp_status(&e), e.to_string())
}

fn curve_failure(e: CurveError) -> Failure {
    let status = match e {
        CurveError::MethodDisagreement { .. } | CurveError::Inconsistent { .. } => LctStatus::Failure,
        _ => LctStatus::InvalidInput,
    };
    Failure(status, e.to_string())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Outcome<&'a T> {
    // SAFETY: the caller guarantees `p` is null or a live handle of type T.
    unsafe { p.as_ref() }.ok_or_else(|| Failure(LctStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_slot<'a, T>(p: *mut T, what: &str) -> Outcome<&'a mut T> {
    // SAFETY: the caller guarantees `p` is null or valid for writes.
    unsafe { p.as_mut() }.ok_or_else(|| Failure(LctStatus::NullPointer, format!("{what} is null")))
}

fn budget_or_default(budget: u64) -> u64 {
    if budget == 0 {
        DEFAULT_BUDGET
    } else {
        budget
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn lct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn lct_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lct_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: `s` came from `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses and validates an ideal document. On `INVALID_INPUT` the error text
/// lists every violation, one per line.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_from_json(json: *const c_char, out: *mut *mut LctIdeal) -> LctStatus {
    guard(|| {
        // SAFETY: forwarded caller guarantees.
        let out = unsafe { out_slot(out, "out") }?;
        *out = ptr::null_mut();
        if json.is_null() {
            return fail(LctStatus::NullPointer, "json is null");
        }
        // SAFETY: non-null and NUL-terminated by contract.
        let bytes = unsafe { CStr::from_ptr(json) }.to_bytes();
        let spec = parse_ideal(bytes).map_err(|e| Failure(LctStatus::InvalidInput, e.diagnostics().join("\n")))?;
        *out = Box::into_raw(Box::new(LctIdeal { spec }));
        Ok(LctStatus::Ok)
    })
}

/// # Safety
/// `ideal` must be null or a handle from [`lct_ideal_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_free(ideal: *mut LctIdeal) {
    if !ideal.is_null() {
        // SAFETY: the handle came from `Box::into_raw`.
        drop(unsafe { Box::from_raw(ideal) });
    }
}

/// Computes the threshold. Returns `OK` for an exact certificate and
/// `UPPER_BOUND` when only an upper bound was certified; both set `out`.
///
/// # Safety
/// `ideal` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_compute(ideal: *const LctIdeal, out: *mut *mut LctCertificate) -> LctStatus {
    guard(|| {
        // SAFETY: forwarded caller guarantees.
        let out = unsafe { out_slot(out, "out") }?;
        *out = ptr::null_mut();
        // SAFETY: forwarded caller guarantees.
        let ideal = unsafe { borrow(ideal, "ideal") }?;
        let cert = compute_lct(&ideal.spec);
        let status = if cert.is_exact() { LctStatus::Ok } else { LctStatus::UpperBound };
        *out = Box::into_raw(Box::new(LctCertificate { cert }));
        Ok(status)
    })
}

/// # Safety
/// `cert` must be null or a handle from [`lct_ideal_compute`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lct_certificate_free(cert: *mut LctCertificate) {
    if !cert.is_null() {
        // SAFETY: the handle came from `Box::into_raw`.
        drop(unsafe { Box::from_raw(cert) });
    }
}

/// True when the certificate carries a criterion witness. False for null.
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lct_certificate_is_exact(cert: *const LctCertificate) -> bool {
    // SAFETY: forwarded caller guarantees.
    unsafe { cert.as_ref() }.is_some_and(|c| c.cert.is_exact())
}

/// The value as `"p"` or `"p/q"`, or null if `cert` is null.
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lct_certificate_value(cert: *const LctCertificate) -> *mut c_char {
    // SAFETY: forwarded caller guarantees.
    match unsafe { cert.as_ref() } {
        Some(c) => to_c_string(format_rational(&c.cert.value)),
        None => {
            set_error("cert is null");
            ptr::null_mut()
        }
    }
}

fn json_string(value: &serde_json::Value) -> *mut c_char {
    to_c_string(serde_json::to_string_pretty(value).expect("JSON values serialize"))
}

/// The certificate as JSON; with `full`, the witness, matrix, rank and
/// kernel dimension are included. Null if `cert` is null.
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lct_certificate_to_json(cert: *const LctCertificate, full: bool) -> *mut c_char {
    // SAFETY: forwarded caller guarantees.
    match unsafe { cert.as_ref() } {
        Some(c) => json_string(&certificate_json(&c.cert, full)),
        None => {
            set_error("cert is null");
            ptr::null_mut()
        }
    }
}

/// Classifies the monomial curve `(t^n1, t^n2, t^n3)` and writes a JSON
/// report with the table and LP values, which must agree.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lct_curve_json(n1: u64, n2: u64, n3: u64, out: *mut *mut c_char) -> LctStatus {
    guard(|| {
        // SAFETY: forwarded caller guarantees.
        let out = unsafe { out_slot(out, "out") }?;
        *out = ptr::null_mut();
        let report = curve_lct(n1, n2, n3, CurveMethod::Both).map_err(curve_failure)?;
        *out = json_string(&curve_report_json(&report, true));
        Ok(LctStatus::Ok)
    })
}

/// Writes `ν(p^e)`. A `budget` of 0 selects the default term budget.
///
/// # Safety
/// `ideal` must be a live handle; `nu` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lct_ideal_nu(ideal: *const LctIdeal, p: u64, e: u32, budget: u64, nu: *mut u64) -> LctStatus {
    guard(|| {
        // SAFETY: forwarded caller guarantees.
        let nu = unsafe { out_slot(nu, "nu") }?;
        // SAFETY: forwarded caller guarantees.
        let ideal = unsafe { borrow(ideal, "ideal") }?;
        let options = NuOptions { budget: budget_or_default(budget), start: None };
        *nu = nu_with(&ideal.spec, p, e, &options).map_err(charp_failure)?.nu;
        Ok(LctStatus::Ok)
    })
}

/// Checks `ν(p^e) >= value·(p^e - 1)`. Requires an exact certificate for
/// the same ideal and `p ≡ 1 mod N`; otherwise returns `PRECONDITION`.
/// Returns `FAILURE` if the bound does not hold.
///
/// # Safety
/// `ideal` and `cert` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn lct_fpt_lower_check(
    ideal: *const LctIdeal,
    cert: *const LctCertificate,
    p: u64,
    e: u32,
    budget: u64,
) -> LctStatus {
    guard(|| {
        // SAFETY: forwarded caller guarantees.
        let (ideal, cert) = unsafe { (borrow(ideal, "ideal")?, borrow(cert, "cert")?) };
        let holds =
            fpt_lower_check_with(&ideal.spec, &cert.cert, p, e, budget_or_default(budget)).map_err(charp_failure)?;
        if holds {
            Ok(LctStatus::Ok)
        } else {
            fail(LctStatus::Failure, format!("nu({p}^{e}) is below the certified lower bound"))
        }
    })
}
