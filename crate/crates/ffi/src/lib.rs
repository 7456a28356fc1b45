//! C ABI over `pseudohopf`.
//!
//! Every function returns a [`PhStatus`]. On any status other than `PH_STATUS_OK`
//! the message is available from [`ph_last_error`] until the next call on
//! the same thread. Strings handed out by the library are freed with
//! [`ph_string_free`], models with [`ph_model_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pseudohopf::clifford::{self, BaseQuery, CliffordSignature, Field, ObstructionQuery, TotalKind, Verdict};
use pseudohopf::submersion::{SubmersionKind, SubmersionModel};
use pseudohopf::verify::{self, CheckSpec};
use pseudohopf::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhStatus {
    Ok = 0,
    /// A verification ran and at least one check failed.
    CheckFailed = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    Numerical = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhModelKind {
    /// Parameters `m`, `s`.
    Theta = 0,
    /// Parameter `k`.
    ComplexHopf = 1,
    /// Parameter `k`.
    QuaternionicHopf = 2,
    OctonionicHopf = 3,
    /// Parameter `k`.
    ComplexToQuaternionic = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhField {
    Real = 0,
    Complex = 1,
    Quaternion = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhBase {
    Complex = 0,
    Quaternionic = 1,
    RealHyperbolic = 2,
    Cayley = 3,
    Any = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhTotal {
    Real = 0,
    Complex = 1,
}

/// `summands` copies of `M(size, field)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhAlgebraClass {
    pub field: PhField,
    pub size: usize,
    pub summands: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhDims {
    pub total_dim: usize,
    pub total_index: usize,
    pub fibre_dim: usize,
    pub base_dim: usize,
    pub base_index: usize,
}

/// Outcome of one check. `max_residual` is NaN when the check errored.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhCheckResult {
    pub pass: bool,
    pub max_residual: f64,
    pub tol: f64,
}

/// Opaque model handle.
pub struct PhModel {
    inner: SubmersionModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PhStatus {
    match e {
        Error::Unsupported(_) => PhStatus::Unsupported,
        Error::Config(_) | Error::DimensionMismatch { .. } | Error::ContextMismatch { .. } | Error::Domain(_) => {
            PhStatus::InvalidArgument
        }
        _ => PhStatus::Numerical,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<PhStatus, (PhStatus, String)>) -> PhStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            PhStatus::Panic
        }
    }
}

fn lib(e: Error) -> (PhStatus, String) {
    (status_of(&e), e.to_string())
}

fn invalid(msg: &str) -> (PhStatus, String) {
    (PhStatus::InvalidArgument, msg.to_string())
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (PhStatus, String)> {
    p.as_mut().ok_or_else(|| invalid(&format!("{what} is null")))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior nul removed").into_raw()
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library.
#[no_mangle]
pub extern "C" fn ph_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ph_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a model. `a` and `b` are `m, s` for theta, `k` (in `a`) for the
/// Hopf families; unused parameters are ignored.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ph_model_new(kind: PhModelKind, a: usize, b: usize, out: *mut *mut PhModel) -> PhStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let kind = match kind {
            PhModelKind::Theta => SubmersionKind::ThetaCircle { m: a, s: b },
            PhModelKind::ComplexHopf => SubmersionKind::ComplexHopf { k: a },
            PhModelKind::QuaternionicHopf => SubmersionKind::QuaternionicHopf { k: a },
            PhModelKind::OctonionicHopf => SubmersionKind::OctonionicHopf,
            PhModelKind::ComplexToQuaternionic => SubmersionKind::ComplexToQuaternionic { k: a },
        };
        let inner = SubmersionModel::new(kind).map_err(lib)?;
        *out = Box::into_raw(Box::new(PhModel { inner }));
        Ok(PhStatus::Ok)
    })
}

/// Frees a model. Null is ignored.
///
/// # Safety
/// `model` must come from [`ph_model_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ph_model_free(model: *mut PhModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ph_model_dims(model: *const PhModel, out: *mut PhDims) -> PhStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| invalid("model is null"))?;
        let d = m.inner.dims();
        *out_ref(out, "out")? = PhDims {
            total_dim: d.m_tot,
            total_index: d.s_tot,
            fibre_dim: d.r,
            base_dim: d.n,
            base_index: d.base_index,
        };
        Ok(PhStatus::Ok)
    })
}

/// Runs the named check. `model` may be null for checks without a model.
/// Returns `PH_STATUS_CHECK_FAILED` when the check ran and failed; `out` is
/// filled in either case.
///
/// # Safety
/// `name` must be a nul-terminated string, `model` null or live, `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ph_run_check(
    model: *const PhModel,
    name: *const c_char,
    samples: usize,
    tol: f64,
    seed: u64,
    out: *mut PhCheckResult,
) -> PhStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if name.is_null() {
            return Err(invalid("name is null"));
        }
        let name = CStr::from_ptr(name).to_str().map_err(|_| invalid("name is not UTF-8"))?;
        let model = model.as_ref().map(|m| m.inner);
        let spec = CheckSpec::new(name, model, samples, tol, seed).map_err(lib)?;
        let rec = verify::run_check(&spec).map_err(lib)?;
        *out = PhCheckResult { pass: rec.pass, max_residual: rec.max_residual.unwrap_or(f64::NAN), tol: rec.tol };
        if let Some(e) = rec.error {
            set_error(e);
        }
        Ok(if rec.pass { PhStatus::Ok } else { PhStatus::CheckFailed })
    })
}

/// The real Clifford algebra with `p` positive and `q` negative generators.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ph_classify(p: usize, q: usize, out: *mut PhAlgebraClass) -> PhStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let c = clifford::classify(CliffordSignature::new(p, q).map_err(lib)?).map_err(lib)?;
        let field = match c.field {
            Field::R => PhField::Real,
            Field::C => PhField::Complex,
            Field::H => PhField::Quaternion,
        };
        *out = PhAlgebraClass { field, size: c.size, summands: c.summands };
        Ok(PhStatus::Ok)
    })
}

/// Obstruction verdict. `reason` receives the reason string when the
/// combination is obstructed and null otherwise; free it with
/// [`ph_string_free`]. `reason` itself may be null.
///
/// # Safety
/// `admissible` must be valid for writes; `reason` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ph_obstruction(
    total: PhTotal,
    s: usize,
    n: usize,
    base: PhBase,
    admissible: *mut bool,
    reason: *mut *mut c_char,
) -> PhStatus {
    guard(|| {
        let admissible = out_ref(admissible, "admissible")?;
        let total = match total {
            PhTotal::Real => TotalKind::Real,
            PhTotal::Complex => TotalKind::Complex,
        };
        let base = match base {
            PhBase::Complex => BaseQuery::Complex,
            PhBase::Quaternionic => BaseQuery::Quaternionic,
            PhBase::RealHyperbolic => BaseQuery::RealHyperbolic,
            PhBase::Cayley => BaseQuery::Cayley,
            PhBase::Any => BaseQuery::Any,
        };
        let v = clifford::existence_obstruction(ObstructionQuery { total, s, n, base }).map_err(lib)?;
        *admissible = v == Verdict::Admissible;
        if let Some(r) = reason.as_mut() {
            *r = match v {
                Verdict::Admissible => ptr::null_mut(),
                Verdict::Obstructed(why) => to_c_string(why),
            };
        }
        Ok(PhStatus::Ok)
    })
}

/// Runs every supported check on `model`, or the full default suite when
/// `model` is null, and returns the JSON report in `json`.
///
/// # Safety
/// `model` null or live, `json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ph_verify_json(
    model: *const PhModel,
    samples: usize,
    tol: f64,
    seed: u64,
    json: *mut *mut c_char,
) -> PhStatus {
    guard(|| {
        let json = out_ref(json, "json")?;
        let (suite, specs) = match model.as_ref() {
            Some(m) => {
                let specs = verify::suite_for(&[m.inner], samples, tol, seed)
                    .map_err(lib)?
                    .into_iter()
                    .filter(|s| s.model.is_some())
                    .collect();
                (m.inner.kind().to_string(), specs)
            }
            None => ("default".to_string(), verify::default_suite(samples, tol, seed).map_err(lib)?),
        };
        let report = verify::run_named_suite(&suite, seed, &specs);
        *json = to_c_string(report.to_json().map_err(lib)?);
        Ok(if report.pass { PhStatus::Ok } else { PhStatus::CheckFailed })
    })
}
