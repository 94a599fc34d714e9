//! C ABI for the engine: run an instance (TOML/JSON text or file), get the
//! status and the JSON report back through an opaque handle.
//!
//! Every function is `extern "C"`; errors come back as `SamuelStatus` codes
//! and a per-thread message retrievable with `samuel_last_error`.  The
//! header is generated by cbindgen at build time (see `include/samuel.h`).

use libc::c_char;
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::path::PathBuf;

use samuel::instance::InstanceSpec;
use samuel::pipeline;
use samuel::report::{Report, RunStatus};

/// Status codes mirroring the CLI exit conventions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamuelStatus {
    /// Ran to completion, all applicable checks hold.
    Ok = 0,
    /// Malformed input (parse error, bad instance, io).
    Usage = 2,
    /// An applicable bound failed on this instance.
    Finding = 3,
    /// Internal cross-check failure.
    Internal = 4,
    /// Completed, but some hypothesis was only assumed.
    HypothesisUnverified = 5,
    /// Null pointer or invalid UTF-8 handed across the boundary.
    InvalidArgument = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Opaque report handle.
pub struct SamuelReport {
    report: Report,
    json: CString,
}

fn status_of(report: &Report) -> SamuelStatus {
    match report.meta.status {
        RunStatus::Clean => SamuelStatus::Ok,
        RunStatus::Finding => SamuelStatus::Finding,
        RunStatus::Internal => SamuelStatus::Internal,
        RunStatus::HypothesisUnverified => SamuelStatus::HypothesisUnverified,
    }
}

fn run_spec(spec: &InstanceSpec, out: *mut *mut SamuelReport) -> SamuelStatus {
    match pipeline::run_instance(spec) {
        Ok(analysis) => {
            let report = analysis.report;
            let status = status_of(&report);
            let json = CString::new(report.to_json().replace('\0', " "))
                .unwrap_or_default();
            let handle = Box::new(SamuelReport { report, json });
            unsafe {
                *out = Box::into_raw(handle);
            }
            status
        }
        Err(e) => {
            set_error(&e.to_string());
            unsafe {
                *out = std::ptr::null_mut();
            }
            SamuelStatus::Usage
        }
    }
}

/// Run an instance given as TOML text.  On success `*out` owns the report.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn samuel_run_toml(
    text: *const c_char,
    out: *mut *mut SamuelReport,
) -> SamuelStatus {
    if text.is_null() || out.is_null() {
        set_error("null pointer");
        return SamuelStatus::InvalidArgument;
    }
    let text = match CStr::from_ptr(text).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("input is not valid UTF-8");
            return SamuelStatus::InvalidArgument;
        }
    };
    match InstanceSpec::from_toml(text) {
        Ok(spec) => run_spec(&spec, out),
        Err(e) => {
            set_error(&e.to_string());
            *out = std::ptr::null_mut();
            SamuelStatus::Usage
        }
    }
}

/// Run an instance file (TOML or JSON, detected by extension).
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn samuel_run_file(
    path: *const c_char,
    out: *mut *mut SamuelReport,
) -> SamuelStatus {
    if path.is_null() || out.is_null() {
        set_error("null pointer");
        return SamuelStatus::InvalidArgument;
    }
    let path = match CStr::from_ptr(path).to_str() {
        Ok(t) => PathBuf::from(t),
        Err(_) => {
            set_error("path is not valid UTF-8");
            return SamuelStatus::InvalidArgument;
        }
    };
    match InstanceSpec::from_path(&path) {
        Ok(spec) => run_spec(&spec, out),
        Err(e) => {
            set_error(&e.to_string());
            *out = std::ptr::null_mut();
            SamuelStatus::Usage
        }
    }
}

/// The full JSON report; the string lives as long as the handle.
///
/// # Safety
/// `report` must be a live handle from `samuel_run_*`.
#[no_mangle]
pub unsafe extern "C" fn samuel_report_json(report: *const SamuelReport) -> *const c_char {
    if report.is_null() {
        return std::ptr::null();
    }
    (*report).json.as_ptr()
}

/// Number of verdicts in the report.
///
/// # Safety
/// `report` must be a live handle from `samuel_run_*`.
#[no_mangle]
pub unsafe extern "C" fn samuel_report_verdict_count(report: *const SamuelReport) -> usize {
    if report.is_null() {
        return 0;
    }
    (*report).report.verdicts.len()
}

/// Release a report handle.
///
/// # Safety
/// `report` must come from `samuel_run_*` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn samuel_report_free(report: *mut SamuelReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Last error message on this thread (empty when none).  Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn samuel_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Engine version as a static string.
#[no_mangle]
pub extern "C" fn samuel_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = r#"
seed = 1
[ring]
field = "Q"
vars = ["x", "y"]
[ideal]
gens = ["x^2", "y^2"]
[flags]
superficial = "off"
depth = "off"
ratliff_rush = "off"
"#;

    #[test]
    fn round_trip_through_the_c_surface() {
        let text = CString::new(SPEC).unwrap();
        let mut out: *mut SamuelReport = std::ptr::null_mut();
        let status = unsafe { samuel_run_toml(text.as_ptr(), &mut out) };
        assert_eq!(status, SamuelStatus::Ok);
        assert!(!out.is_null());
        let json = unsafe { CStr::from_ptr(samuel_report_json(out)) };
        let report = Report::from_json(json.to_str().unwrap()).unwrap();
        assert_eq!(report.hilbert.unwrap().e[0], 4);
        unsafe { samuel_report_free(out) };
    }

    #[test]
    fn bad_input_reports_usage() {
        let text = CString::new("not toml at all [").unwrap();
        let mut out: *mut SamuelReport = std::ptr::null_mut();
        let status = unsafe { samuel_run_toml(text.as_ptr(), &mut out) };
        assert_eq!(status, SamuelStatus::Usage);
        assert!(out.is_null());
        let msg = unsafe { CStr::from_ptr(samuel_last_error()) };
        assert!(!msg.to_str().unwrap().is_empty());
    }
}
