use std::ffi::{CStr, CString};
use std::ptr;

use boundgen_ffi::*;

fn last_error() -> String {
    let p = bg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { bg_string_free(s) };
    out
}

#[test]
fn factor_verify_and_json() {
    let text = CString::new("4 4\n1 2 3 4\n0 1 5 6\n0 0 1 7\n0 0 0 1\n").unwrap();
    let mut cert = ptr::null_mut();
    let st = unsafe { bg_factor_text(text.as_ptr(), ptr::null(), &mut cert) };
    assert_eq!(st, BgStatus::Ok);
    assert!(bg_last_error().is_null());

    let mut ok = false;
    assert_eq!(unsafe { bg_certificate_verify(cert, &mut ok) }, BgStatus::Ok);
    assert!(ok);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { bg_certificate_json(cert, &mut json) }, BgStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["n"], 4);
    assert_eq!(v["policy"], "Z-3k");
    assert_eq!(v["factors"].as_array().unwrap().len(), unsafe { bg_certificate_len(cert) });
    unsafe { bg_certificate_free(cert) };
}

#[test]
fn policy_selection() {
    let text = CString::new("3 3\n1 2 0\n0 1 0\n0 -1 1\n").unwrap();
    let policy = CString::new("z2k1").unwrap();
    let mut cert = ptr::null_mut();
    assert_eq!(unsafe { bg_factor_text(text.as_ptr(), policy.as_ptr(), &mut cert) }, BgStatus::Ok);
    let mut json = ptr::null_mut();
    unsafe { bg_certificate_json(cert, &mut json) };
    assert_eq!(serde_json::from_str::<serde_json::Value>(&take(json)).unwrap()["policy"], "Z-2k1");
    unsafe { bg_certificate_free(cert) };

    let fp = CString::new("fp2k").unwrap();
    assert_eq!(unsafe { bg_factor_text(text.as_ptr(), fp.as_ptr(), &mut cert) }, BgStatus::Domain);
    assert!(cert.is_null());
    let bogus = CString::new("nope").unwrap();
    assert_eq!(unsafe { bg_factor_text(text.as_ptr(), bogus.as_ptr(), &mut cert) }, BgStatus::Parse);
    assert!(last_error().contains("nope"));
}

#[test]
fn error_codes() {
    let mut cert = ptr::null_mut();
    let bad = CString::new("2 2\n1 2\n3 x\n").unwrap();
    assert_eq!(unsafe { bg_factor_text(bad.as_ptr(), ptr::null(), &mut cert) }, BgStatus::Parse);
    assert!(last_error().contains("line 3"));

    let not_sl = CString::new("3 3\n2 0 0\n0 1 0\n0 0 1\n").unwrap();
    assert_eq!(unsafe { bg_factor_text(not_sl.as_ptr(), ptr::null(), &mut cert) }, BgStatus::Domain);
    assert!(cert.is_null());

    assert_eq!(unsafe { bg_factor_text(ptr::null(), ptr::null(), &mut cert) }, BgStatus::NullPointer);
    assert_eq!(unsafe { bg_factor_text(bad.as_ptr(), ptr::null(), ptr::null_mut()) }, BgStatus::NullPointer);

    let invalid = [0xffu8, 0xfe, 0];
    let st = unsafe { bg_factor_text(invalid.as_ptr().cast(), ptr::null(), &mut cert) };
    assert_eq!(st, BgStatus::InvalidUtf8);

    let mut ok = false;
    assert_eq!(unsafe { bg_certificate_verify(ptr::null(), &mut ok) }, BgStatus::NullPointer);
    assert_eq!(unsafe { bg_certificate_len(ptr::null()) }, 0);
    unsafe {
        bg_certificate_free(ptr::null_mut());
        bg_string_free(ptr::null_mut());
    }
}

#[test]
fn constants() {
    assert!((bg_kazhdan_lower(100) - 1.0 / 1280.0).abs() < 1e-18);
    assert!((bg_kazhdan_upper(8) - 0.5).abs() < 1e-15);
    assert!(bg_kazhdan_lower(2).is_nan());

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { bg_constants_json(100, 0, &mut s) }, BgStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["n"], 100);
    assert!(v["p"].is_null());

    assert_eq!(unsafe { bg_constants_json(3, 2, &mut s) }, BgStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["group_size"], "168");

    assert_eq!(unsafe { bg_constants_json(3, 4, &mut s) }, BgStatus::Domain);
    assert_eq!(unsafe { bg_constants_json(2, 0, &mut s) }, BgStatus::Domain);
    assert!(last_error().contains("n >= 3"));
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/boundgen.h")).unwrap();
    for sym in ["BOUNDGEN_H", "BG_STATUS_OK", "typedef struct BgCertificate", "bg_factor_text", "bg_last_error"] {
        assert!(h.contains(sym), "{sym} missing from header");
    }
}
