use std::ffi::{CStr, CString};
use std::ptr;

use pseudohopf_ffi::*;

fn model(kind: PhModelKind, a: usize, b: usize) -> *mut PhModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ph_model_new(kind, a, b, &mut m) }, PhStatus::Ok);
    m
}

fn last_error() -> String {
    let p = ph_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn model_lifecycle_and_dims() {
    let m = model(PhModelKind::OctonionicHopf, 0, 0);
    let mut d = PhDims { total_dim: 0, total_index: 0, fibre_dim: 0, base_dim: 0, base_index: 0 };
    assert_eq!(unsafe { ph_model_dims(m, &mut d) }, PhStatus::Ok);
    assert_eq!((d.total_dim, d.total_index, d.fibre_dim, d.base_dim), (15, 7, 7, 8));
    unsafe { ph_model_free(m) };
    unsafe { ph_model_free(ptr::null_mut()) };
}

#[test]
fn invalid_model_sets_error() {
    let mut m = ptr::null_mut();
    let st = unsafe { ph_model_new(PhModelKind::QuaternionicHopf, 0, 0, &mut m) };
    assert_eq!(st, PhStatus::InvalidArgument);
    assert!(m.is_null());
    assert!(last_error().contains("k >= 1"));
}

#[test]
fn run_check_passes_and_reports_residual() {
    let m = model(PhModelKind::QuaternionicHopf, 2, 0);
    let name = CString::new("lemma3b").unwrap();
    let mut r = PhCheckResult { pass: false, max_residual: f64::NAN, tol: 0.0 };
    let st = unsafe { ph_run_check(m, name.as_ptr(), 20, 1e-8, 42, &mut r) };
    assert_eq!(st, PhStatus::Ok);
    assert!(r.pass && r.max_residual < 1e-8);
    unsafe { ph_model_free(m) };
}

#[test]
fn unsupported_pairing_is_reported() {
    let m = model(PhModelKind::Theta, 3, 3);
    let name = CString::new("pinching").unwrap();
    let mut r = PhCheckResult { pass: false, max_residual: 0.0, tol: 0.0 };
    let st = unsafe { ph_run_check(m, name.as_ptr(), 5, 1e-8, 1, &mut r) };
    assert_eq!(st, PhStatus::Unsupported);
    assert!(last_error().starts_with("unsupported: indefinite base"));
    unsafe { ph_model_free(m) };
}

#[test]
fn model_free_check_accepts_null_model() {
    let name = CString::new("classify_table").unwrap();
    let mut r = PhCheckResult { pass: false, max_residual: 1.0, tol: 0.0 };
    assert_eq!(unsafe { ph_run_check(ptr::null(), name.as_ptr(), 1, 1e-8, 0, &mut r) }, PhStatus::Ok);
    assert_eq!(r.max_residual, 0.0);
}

#[test]
fn classify_cl91() {
    let mut c = PhAlgebraClass { field: PhField::Complex, size: 0, summands: 0 };
    assert_eq!(unsafe { ph_classify(1, 8, &mut c) }, PhStatus::Ok);
    assert_eq!(c, PhAlgebraClass { field: PhField::Real, size: 16, summands: 2 });
    assert_eq!(unsafe { ph_classify(7, 6, &mut c) }, PhStatus::InvalidArgument);
}

#[test]
fn obstruction_reason_string() {
    let mut ok = true;
    let mut reason = ptr::null_mut();
    let st = unsafe { ph_obstruction(PhTotal::Real, 7, 16, PhBase::Cayley, &mut ok, &mut reason) };
    assert_eq!(st, PhStatus::Ok);
    assert!(!ok);
    let text = unsafe { CStr::from_ptr(reason) }.to_string_lossy().into_owned();
    assert!(text.contains("we get a contradiction"));
    unsafe { ph_string_free(reason) };

    let st = unsafe { ph_obstruction(PhTotal::Real, 3, 8, PhBase::Quaternionic, &mut ok, &mut reason) };
    assert_eq!(st, PhStatus::Ok);
    assert!(ok && reason.is_null());
}

#[test]
fn verify_json_for_one_model() {
    let m = model(PhModelKind::ComplexHopf, 1, 0);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ph_verify_json(m, 5, 1e-8, 3, &mut json) }, PhStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_string_lossy().into_owned();
    let report = pseudohopf::verify::VerificationReport::from_json(&text).unwrap();
    assert!(report.pass && !report.checks.is_empty());
    unsafe { ph_string_free(json) };
    unsafe { ph_model_free(m) };
}

#[test]
fn null_outputs_are_rejected() {
    assert_eq!(unsafe { ph_classify(0, 0, ptr::null_mut()) }, PhStatus::InvalidArgument);
    assert!(last_error().contains("null"));
}
