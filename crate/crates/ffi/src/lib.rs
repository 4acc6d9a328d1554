//! C ABI over the factorization and bound tools.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `bg_*_free`. Every fallible call returns a
//! `BgStatus`; the message for the most recent failure on the calling thread
//! is available from `bg_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use boundgen::algebra::IntMat;
use boundgen::constants::{bound_report, BoundOptions};
use boundgen::factor::{factor_full, verify_certificate, FactorCertificate};
use boundgen::vecsys::Policy;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Panic = 5,
}

/// A factorization certificate together with the matrix it factors.
pub struct BgCertificate {
    input: IntMat,
    cert: FactorCertificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: BgStatus, msg: impl Into<String>) -> BgStatus {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
    status
}

fn guard(f: impl FnOnce() -> BgStatus) -> BgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(BgStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, BgStatus> {
    if s.is_null() {
        return Err(fail(BgStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(BgStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> BgStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            BgStatus::Ok
        }
        Err(e) => fail(BgStatus::Panic, e.to_string()),
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next `bg_*` call on the same thread.
#[no_mangle]
pub extern "C" fn bg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Factors a matrix given in the text format (`rows cols` header, one row per
/// line). `policy` is "z3k" or "z2k1"; NULL selects z3k.
///
/// # Safety
/// `text` must be a NUL-terminated string, `policy` NULL or NUL-terminated,
/// and `out` a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn bg_factor_text(
    text: *const c_char,
    policy: *const c_char,
    out: *mut *mut BgCertificate,
) -> BgStatus {
    guard(|| {
        if out.is_null() {
            return fail(BgStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let policy = if policy.is_null() {
            Policy::Z3k
        } else {
            let name = match read_str(policy) {
                Ok(p) => p,
                Err(s) => return s,
            };
            match name.parse::<Policy>() {
                Ok(Policy::Fp2k) => return fail(BgStatus::Domain, "factorization needs an integer policy"),
                Ok(p) => p,
                Err(e) => return fail(BgStatus::Parse, e.to_string()),
            }
        };
        let input = match IntMat::parse_text(text) {
            Ok(m) => m,
            Err(e) => return fail(BgStatus::Parse, e.to_string()),
        };
        match factor_full(&input, policy) {
            Ok(cert) => {
                *out = Box::into_raw(Box::new(BgCertificate { input, cert }));
                BgStatus::Ok
            }
            Err(e) => fail(BgStatus::Domain, e.to_string()),
        }
    })
}

/// Recomputes the ordered product and compares it with the input matrix.
///
/// # Safety
/// `cert` must come from `bg_factor_text` and `ok` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bg_certificate_verify(cert: *const BgCertificate, ok: *mut bool) -> BgStatus {
    guard(|| {
        if cert.is_null() || ok.is_null() {
            return fail(BgStatus::NullPointer, "null argument");
        }
        let c = &*cert;
        *ok = verify_certificate(&c.cert, &c.input);
        BgStatus::Ok
    })
}

/// Number of generalized factors, or 0 for NULL.
///
/// # Safety
/// `cert` must be NULL or come from `bg_factor_text`.
#[no_mangle]
pub unsafe extern "C" fn bg_certificate_len(cert: *const BgCertificate) -> usize {
    cert.as_ref().map_or(0, |c| c.cert.factors.len())
}

/// Certificate as JSON. Release the string with `bg_string_free`.
///
/// # Safety
/// `cert` must come from `bg_factor_text` and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bg_certificate_json(cert: *const BgCertificate, out: *mut *mut c_char) -> BgStatus {
    guard(|| {
        if cert.is_null() || out.is_null() {
            return fail(BgStatus::NullPointer, "null argument");
        }
        match serde_json::to_string(&(*cert).cert) {
            Ok(s) => write_string(out, s),
            Err(e) => fail(BgStatus::Panic, e.to_string()),
        }
    })
}

/// # Safety
/// `cert` must be NULL or come from `bg_factor_text`, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn bg_certificate_free(cert: *mut BgCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Bound report for SL_n(Z) as JSON, or for SL_n(F_p) when `p` is nonzero.
/// Release the string with `bg_string_free`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bg_constants_json(n: u64, p: u64, out: *mut *mut c_char) -> BgStatus {
    guard(|| {
        if out.is_null() {
            return fail(BgStatus::NullPointer, "null output pointer");
        }
        let opts = BoundOptions { p: (p != 0).then_some(p), ..Default::default() };
        match bound_report(n, &opts) {
            Ok(r) => match serde_json::to_string(&r) {
                Ok(s) => write_string(out, s),
                Err(e) => fail(BgStatus::Panic, e.to_string()),
            },
            Err(e) => fail(BgStatus::Domain, e.to_string()),
        }
    })
}

/// Lower Kazhdan bound 1/(42√n + 860); NaN for n < 3.
#[no_mangle]
pub extern "C" fn bg_kazhdan_lower(n: u64) -> f64 {
    if n < 3 {
        f64::NAN
    } else {
        boundgen::constants::kazhdan_lower_a_prime(n)
    }
}

/// Upper Kazhdan bound √(2/n); NaN for n < 3.
#[no_mangle]
pub extern "C" fn bg_kazhdan_upper(n: u64) -> f64 {
    if n < 3 {
        f64::NAN
    } else {
        boundgen::constants::kazhdan_upper(n)
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
