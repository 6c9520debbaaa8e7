//! C ABI for the csbp library.
//!
//! Conventions:
//! - every fallible call returns a [`CsbpStatus`]; results come back through
//!   out-pointers that are written only on `CSBP_STATUS_OK`
//! - `csbp_last_error_message` retrieves a description of the most recent
//!   failure on the calling thread
//! - handles created by `*_new` functions are freed by the matching `*_free`;
//!   strings returned through `char**` are freed by `csbp_string_free`
//! - all functions catch panics at the boundary and report them as
//!   `CSBP_STATUS_PANIC`

use csbp::error::Error;
use csbp::harness::StudyConfig;
use csbp::riccati;
use csbp::sbp::{assemble_global, GlobalOperator, PeriodicMesh, ReferenceElement};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsbpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Input outside the mathematical domain (post-breaking time, blow-up).
    Domain = 3,
    Diverged = 4,
    IterationLimit = 5,
    Io = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

/// Riccati coefficient regimes (mirror of the library enum).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsbpRiccatiCase {
    LinearConstant = 0,
    LinearExponential = 1,
    Trivial = 2,
    TangentPure = 3,
    RealRoots = 4,
    DoubleRoot = 5,
    ComplexRoots = 6,
}

impl From<riccati::RiccatiCase> for CsbpRiccatiCase {
    fn from(case: riccati::RiccatiCase) -> Self {
        match case {
            riccati::RiccatiCase::LinearConstant => Self::LinearConstant,
            riccati::RiccatiCase::LinearExponential => Self::LinearExponential,
            riccati::RiccatiCase::Trivial => Self::Trivial,
            riccati::RiccatiCase::TangentPure => Self::TangentPure,
            riccati::RiccatiCase::RealRoots => Self::RealRoots,
            riccati::RiccatiCase::DoubleRoot => Self::DoubleRoot,
            riccati::RiccatiCase::ComplexRoots => Self::ComplexRoots,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> CsbpStatus {
    match err {
        Error::UnsupportedDegree(_)
        | Error::MeshTooSmall(_)
        | Error::InsufficientData { .. }
        | Error::InvalidScale
        | Error::DimensionMismatch { .. }
        | Error::EmptySamples
        | Error::InvalidCoefficient { .. }
        | Error::NonPositiveValue(_)
        | Error::InvalidConfig(_)
        | Error::Json(_) => CsbpStatus::InvalidArgument,
        Error::PostBreaking { .. }
        | Error::BlowUpDomain { .. }
        | Error::OracleRange { .. }
        | Error::EnvelopeNotApplicable { .. } => CsbpStatus::Domain,
        Error::Diverged { .. } => CsbpStatus::Diverged,
        Error::IterationLimit { .. } => CsbpStatus::IterationLimit,
        Error::Io(_) => CsbpStatus::Io,
    }
}

fn guarded(body: impl FnOnce() -> CsbpStatus) -> CsbpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic across FFI boundary".into());
            set_last_error(&message);
            CsbpStatus::Panic
        }
    }
}

fn from_result<T>(result: Result<T, Error>, sink: impl FnOnce(T)) -> CsbpStatus {
    match result {
        Ok(value) => {
            sink(value);
            CsbpStatus::Ok
        }
        Err(err) => {
            let status = status_of(&err);
            set_last_error(&err.to_string());
            status
        }
    }
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn csbp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy the last error message on this thread into `buf` (truncated to
/// `capacity` bytes including the nul terminator). Returns the full message
/// length in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must point to `capacity` writable bytes, or be null (query mode).
#[no_mangle]
pub unsafe extern "C" fn csbp_last_error_message(buf: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if !buf.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

// ---------------------------------------------------------------------------
// Riccati envelope queries
// ---------------------------------------------------------------------------

/// Classify the coefficient regime of `y' = a y^2 + b y + c, y(0) = 0`.
///
/// # Safety
/// `out_case` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn csbp_riccati_classify(
    a: f64,
    b: f64,
    c: f64,
    out_case: *mut CsbpRiccatiCase,
) -> CsbpStatus {
    guarded(|| {
        if out_case.is_null() {
            set_last_error("out_case is null");
            return CsbpStatus::NullPointer;
        }
        from_result(riccati::classify(a, b, c), |case| *out_case = case.into())
    })
}

/// Closed-form envelope value `y(t)` for `0 <= t < t*`.
///
/// # Safety
/// `out_y` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn csbp_riccati_evaluate(
    a: f64,
    b: f64,
    c: f64,
    t: f64,
    out_y: *mut f64,
) -> CsbpStatus {
    guarded(|| {
        if out_y.is_null() {
            set_last_error("out_y is null");
            return CsbpStatus::NullPointer;
        }
        from_result(riccati::evaluate(a, b, c, t), |y| *out_y = y)
    })
}

/// Blow-up time of the maximal solution. When the solution exists globally,
/// `*out_finite` is set to false and `*out_t_star` to +inf.
///
/// # Safety
/// `out_t_star` and `out_finite` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn csbp_riccati_blow_up_time(
    a: f64,
    b: f64,
    c: f64,
    out_t_star: *mut f64,
    out_finite: *mut bool,
) -> CsbpStatus {
    guarded(|| {
        if out_t_star.is_null() || out_finite.is_null() {
            set_last_error("output pointer is null");
            return CsbpStatus::NullPointer;
        }
        from_result(riccati::blow_up_time(a, b, c), |t_star| match t_star {
            riccati::BlowUpTime::Finite(t) => {
                *out_t_star = t;
                *out_finite = true;
            }
            riccati::BlowUpTime::Infinite => {
                *out_t_star = f64::INFINITY;
                *out_finite = false;
            }
        })
    })
}

// ---------------------------------------------------------------------------
// Global operator handle
// ---------------------------------------------------------------------------

/// Opaque handle to an assembled global periodic C-SBP operator.
pub struct CsbpOperator(GlobalOperator);

/// Build a degree-`p` operator on `n_e` periodic elements over
/// `[x_left, x_right]`.
///
/// # Safety
/// `out_handle` must be a valid pointer; the returned handle must be released
/// with `csbp_operator_free`.
#[no_mangle]
pub unsafe extern "C" fn csbp_operator_new(
    p: usize,
    n_e: usize,
    x_left: f64,
    x_right: f64,
    out_handle: *mut *mut CsbpOperator,
) -> CsbpStatus {
    guarded(|| {
        if out_handle.is_null() {
            set_last_error("out_handle is null");
            return CsbpStatus::NullPointer;
        }
        if !(x_left < x_right) {
            set_last_error("domain endpoints must satisfy x_left < x_right");
            return CsbpStatus::InvalidArgument;
        }
        let build = ReferenceElement::new(p).and_then(|r| {
            let mesh = PeriodicMesh::new(x_left, x_right, n_e, r.n_nodes())?;
            assemble_global(&mesh, &r)
        });
        from_result(build, |gop| *out_handle = Box::into_raw(Box::new(CsbpOperator(gop))))
    })
}

/// Release an operator handle; null is ignored.
///
/// # Safety
/// `handle` must have been returned by `csbp_operator_new` and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn csbp_operator_free(handle: *mut CsbpOperator) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

unsafe fn with_operator<T>(
    handle: *const CsbpOperator,
    out: *mut T,
    read: impl FnOnce(&GlobalOperator) -> T,
) -> CsbpStatus {
    if handle.is_null() || out.is_null() {
        set_last_error("null pointer argument");
        return CsbpStatus::NullPointer;
    }
    *out = read(&(*handle).0);
    CsbpStatus::Ok
}

/// Number of distinct global nodes.
///
/// # Safety
/// `handle` must be a live operator handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn csbp_operator_node_count(
    handle: *const CsbpOperator,
    out: *mut usize,
) -> CsbpStatus {
    guarded(|| with_operator(handle, out, |gop| gop.n_nodes()))
}

/// Max-abs entry of `Q + Q^T` after periodic assembly.
///
/// # Safety
/// `handle` must be a live operator handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn csbp_operator_skew_residual(
    handle: *const CsbpOperator,
    out: *mut f64,
) -> CsbpStatus {
    guarded(|| with_operator(handle, out, |gop| gop.q().skew_residual()))
}

/// Sum of the assembled norm diagonal (equals the domain length).
///
/// # Safety
/// `handle` must be a live operator handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn csbp_operator_h_sum(
    handle: *const CsbpOperator,
    out: *mut f64,
) -> CsbpStatus {
    guarded(|| with_operator(handle, out, |gop| gop.h_sum()))
}

/// Spectral norm of the element `Q` matrix.
///
/// # Safety
/// `handle` must be a live operator handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn csbp_operator_q_norm(
    handle: *const CsbpOperator,
    out: *mut f64,
) -> CsbpStatus {
    guarded(|| with_operator(handle, out, |gop| gop.q_elem_norm()))
}

// ---------------------------------------------------------------------------
// Study execution
// ---------------------------------------------------------------------------

unsafe fn parse_config(config_json: *const c_char) -> Result<StudyConfig, CsbpStatus> {
    if config_json.is_null() {
        set_last_error("config_json is null");
        return Err(CsbpStatus::NullPointer);
    }
    let text = match CStr::from_ptr(config_json).to_str() {
        Ok(text) => text,
        Err(_) => {
            set_last_error("config_json is not valid UTF-8");
            return Err(CsbpStatus::InvalidUtf8);
        }
    };
    serde_json::from_str(text).map_err(|err| {
        set_last_error(&format!("config parse error: {err}"));
        CsbpStatus::InvalidArgument
    })
}

fn emit_string(out: *mut *mut c_char, text: String) -> CsbpStatus {
    match CString::new(text) {
        Ok(cstring) => {
            unsafe { *out = cstring.into_raw() };
            CsbpStatus::Ok
        }
        Err(_) => {
            set_last_error("report contained an interior nul byte");
            CsbpStatus::InvalidArgument
        }
    }
}

/// Run a convergence study from a JSON `StudyConfig` and return the summary
/// JSON through `out_json` (free with `csbp_string_free`).
///
/// # Safety
/// `config_json` must be a nul-terminated string; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn csbp_run_convergence_study_json(
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> CsbpStatus {
    guarded(|| {
        if out_json.is_null() {
            set_last_error("out_json is null");
            return CsbpStatus::NullPointer;
        }
        let config = match parse_config(config_json) {
            Ok(config) => config,
            Err(status) => return status,
        };
        let run = csbp::harness::run_convergence_study(&config)
            .and_then(|report| Ok(serde_json::to_string_pretty(&report)?));
        from_result_string(run, out_json)
    })
}

/// Run a scaling study from a JSON `StudyConfig` and return the summary JSON
/// through `out_json` (free with `csbp_string_free`).
///
/// # Safety
/// `config_json` must be a nul-terminated string; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn csbp_run_scaling_study_json(
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> CsbpStatus {
    guarded(|| {
        if out_json.is_null() {
            set_last_error("out_json is null");
            return CsbpStatus::NullPointer;
        }
        let config = match parse_config(config_json) {
            Ok(config) => config,
            Err(status) => return status,
        };
        let run = csbp::harness::run_scaling_study(&config)
            .and_then(|report| Ok(serde_json::to_string_pretty(&report)?));
        from_result_string(run, out_json)
    })
}

fn from_result_string(result: Result<String, Error>, out: *mut *mut c_char) -> CsbpStatus {
    match result {
        Ok(text) => emit_string(out, text),
        Err(err) => {
            let status = status_of(&err);
            set_last_error(&err.to_string());
            status
        }
    }
}

/// Free a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must have been returned by a `*_json` function and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn csbp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
