//! C ABI over the swept-region compiler: compile a job description or
//! load a serialized formula, evaluate points, and render the formula.
//! Handles are opaque; strings returned through out-params are owned by
//! the callee and must be released with `sr_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};
use swept_region::job::JobSpec;
use swept_region::region::{self, RegionFormula};
use swept_region::transitions::TransitionOptions;

/// Opaque compiled region handle.
pub struct SrRegion {
    formula: RegionFormula,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrStatus {
    SrOk = 0,
    SrInvalidArgument = 1,
    SrParseError = 2,
    SrCompileError = 3,
    SrEvalError = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap());
}

/// Message for the most recent failure on this thread. Borrowed pointer,
/// valid until the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn sr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, SrStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(SrStatus::SrInvalidArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        SrStatus::SrInvalidArgument
    })
}

fn give_region(formula: RegionFormula, out: *mut *mut SrRegion) -> SrStatus {
    if out.is_null() {
        set_error("null output pointer");
        return SrStatus::SrInvalidArgument;
    }
    unsafe { *out = Box::into_raw(Box::new(SrRegion { formula })) };
    SrStatus::SrOk
}

fn give_string(text: String, out: *mut *mut c_char) -> SrStatus {
    if out.is_null() {
        set_error("null output pointer");
        return SrStatus::SrInvalidArgument;
    }
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            SrStatus::SrOk
        }
        Err(_) => {
            set_error("output contained an interior NUL");
            SrStatus::SrEvalError
        }
    }
}

/// Compile a job description (same JSON accepted by the CLI) into a
/// region handle.
///
/// # Safety
/// `job_json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_region_compile_job(
    job_json: *const c_char,
    out: *mut *mut SrRegion,
) -> SrStatus {
    let text = match read_str(job_json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let spec = match JobSpec::from_str(text) {
        Ok(s) => s,
        Err(e) => {
            set_error(e.to_string());
            return SrStatus::SrParseError;
        }
    };
    let instance = spec.polygon().and_then(|p| Ok((p, spec.trajectory()?)));
    let (p, t) = match instance {
        Ok(v) => v,
        Err(e) => {
            set_error(e.to_string());
            return SrStatus::SrParseError;
        }
    };
    match region::compile(&t, &p, &TransitionOptions::default()) {
        Ok(f) => give_region(f, out),
        Err(e) => {
            set_error(e.to_string());
            SrStatus::SrCompileError
        }
    }
}

/// Load a previously serialized formula (the `.region.json` artifact).
///
/// # Safety
/// `formula_json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_region_from_json(
    formula_json: *const c_char,
    out: *mut *mut SrRegion,
) -> SrStatus {
    let text = match read_str(formula_json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match serde_json::from_str::<RegionFormula>(text) {
        Ok(f) => give_region(f, out),
        Err(e) => {
            set_error(e.to_string());
            SrStatus::SrParseError
        }
    }
}

/// Evaluate the predicate at an obstacle location. Writes 1 (unsafe,
/// collision) or 0 (safe) to `verdict`.
///
/// # Safety
/// `region` must come from a constructor; `verdict` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_region_eval(
    region: *const SrRegion,
    x: c_double,
    y: c_double,
    verdict: *mut c_int,
) -> SrStatus {
    if region.is_null() || verdict.is_null() {
        set_error("null argument");
        return SrStatus::SrInvalidArgument;
    }
    match (*region).formula.evaluate((x, y)) {
        Ok(v) => {
            *verdict = v as c_int;
            SrStatus::SrOk
        }
        Err(e) => {
            set_error(e.to_string());
            SrStatus::SrEvalError
        }
    }
}

/// Serialize the formula as JSON.
///
/// # Safety
/// `region` must come from a constructor; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_region_to_json(
    region: *const SrRegion,
    out: *mut *mut c_char,
) -> SrStatus {
    if region.is_null() {
        set_error("null region");
        return SrStatus::SrInvalidArgument;
    }
    match serde_json::to_string_pretty(&(*region).formula) {
        Ok(s) => give_string(s, out),
        Err(e) => {
            set_error(e.to_string());
            SrStatus::SrEvalError
        }
    }
}

/// Render the formula as LaTeX.
///
/// # Safety
/// `region` must come from a constructor; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_region_to_latex(
    region: *const SrRegion,
    out: *mut *mut c_char,
) -> SrStatus {
    if region.is_null() {
        set_error("null region");
        return SrStatus::SrInvalidArgument;
    }
    give_string(region::to_latex(&(*region).formula), out)
}

/// Render the formula as computer-algebra plotting input over the given
/// window.
///
/// # Safety
/// `region` must come from a constructor; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sr_region_to_cas(
    region: *const SrRegion,
    x0: c_double,
    x1: c_double,
    y0: c_double,
    y1: c_double,
    out: *mut *mut c_char,
) -> SrStatus {
    if region.is_null() {
        set_error("null region");
        return SrStatus::SrInvalidArgument;
    }
    give_string(region::to_cas(&(*region).formula, (x0, x1, y0, y1)), out)
}

/// Release a region handle. Null is a no-op.
///
/// # Safety
/// `region` must come from a constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sr_region_free(region: *mut SrRegion) {
    if !region.is_null() {
        drop(Box::from_raw(region));
    }
}

/// Release a string returned through an out-param. Null is a no-op.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
