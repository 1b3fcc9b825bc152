//! C ABI over the `gcas` crate.
//!
//! Objects cross the boundary as opaque handles ([`GcasArraySet`],
//! [`GcasReport`]) that the caller releases with the matching `*_free`
//! function. Every fallible call returns a [`GcasStatus`]; on failure a
//! human-readable message is kept per thread and can be fetched with
//! [`gcas_last_error`]. Panics never unwind into C: they are reported as
//! `GCAS_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gcas::document::{ArraySetDocument, ParamsDocument};
use gcas::{ArraySet, GcasError, VerificationReport};

/// Result code of every fallible call. Codes 0 to 4 match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcasStatus {
    Ok = 0,
    /// Input text could not be parsed.
    Parse = 1,
    /// Parameters violate a construction constraint.
    InvalidParams = 2,
    /// The set was checked and is not complementary.
    NotGcas = 3,
    Internal = 4,
    NullPointer = 5,
    OutOfRange = 6,
    BufferTooSmall = 7,
}

/// Opaque array set.
pub struct GcasArraySet(ArraySet);

/// Opaque verification report.
pub struct GcasReport(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

type Outcome = Result<(), (GcasStatus, String)>;

fn from_error(e: GcasError) -> (GcasStatus, String) {
    let status = match e {
        GcasError::Io(_) | GcasError::Parse(_) => GcasStatus::Parse,
        GcasError::Internal(_) => GcasStatus::Internal,
        _ => GcasStatus::InvalidParams,
    };
    (status, e.to_string())
}

/// Runs `f`, translating errors and panics into a status code.
fn guard<F: FnOnce() -> Outcome>(f: F) -> GcasStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GcasStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside gcas".into());
            GcasStatus::Internal
        }
    }
}

fn null(name: &str) -> (GcasStatus, String) {
    (GcasStatus::NullPointer, format!("{name} is null"))
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, (GcasStatus, String)> {
    if s.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(s).to_str().map_err(|e| (GcasStatus::Parse, format!("{name}: {e}")))
}

fn into_c_string(s: String) -> Result<*mut c_char, (GcasStatus, String)> {
    CString::new(s).map(CString::into_raw).map_err(|e| (GcasStatus::Internal, e.to_string()))
}

unsafe fn write_set(out: *mut *mut GcasArraySet, set: ArraySet) {
    *out = Box::into_raw(Box::new(GcasArraySet(set)));
}

/// Builds the set described by a parameter document (JSON with a
/// `"theorem"` field of `"t1"` or `"t2"`).
///
/// # Safety
/// `params_json` must be a NUL-terminated string and `out` a valid pointer.
/// On success `*out` owns a new handle; release it with [`gcas_set_free`].
#[no_mangle]
pub unsafe extern "C" fn gcas_set_from_params_json(params_json: *const c_char, out: *mut *mut GcasArraySet) -> GcasStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(params_json, "params_json")?;
        let doc: ParamsDocument = serde_json::from_str(text).map_err(|e| (GcasStatus::Parse, e.to_string()))?;
        let params = doc.to_params().map_err(|v| (GcasStatus::InvalidParams, v.join("\n")))?;
        params.validate().map_err(|v| (GcasStatus::InvalidParams, v.join("\n")))?;
        let set = params.build().map_err(from_error)?;
        write_set(out, set);
        Ok(())
    })
}

/// Parses an array-set document.
///
/// # Safety
/// Same contract as [`gcas_set_from_params_json`].
#[no_mangle]
pub unsafe extern "C" fn gcas_set_from_json(set_json: *const c_char, out: *mut *mut GcasArraySet) -> GcasStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let doc = ArraySetDocument::from_json(read_str(set_json, "set_json")?).map_err(from_error)?;
        let set = ArraySet::try_from(&doc).map_err(|e| (GcasStatus::Parse, e.to_string()))?;
        write_set(out, set);
        Ok(())
    })
}

/// The nine-member worked example over `Z_6` with 2×8 arrays.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcas_example1(out: *mut *mut GcasArraySet) -> GcasStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let set = gcas::build_t1_set(&gcas::example1_params()).map_err(from_error)?;
        write_set(out, set);
        Ok(())
    })
}

/// Serializes a set as JSON. Free the string with [`gcas_string_free`].
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcas_set_to_json(set: *const GcasArraySet, out: *mut *mut c_char) -> GcasStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(ArraySetDocument::from(&set.0).to_json())?;
        Ok(())
    })
}

/// Number of members, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcas_set_len(set: *const GcasArraySet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// Rows per member (`L1`), or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcas_set_rows(set: *const GcasArraySet) -> usize {
    set.as_ref().map_or(0, |s| s.0.shape().0)
}

/// Columns per member (`L2`), or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcas_set_cols(set: *const GcasArraySet) -> usize {
    set.as_ref().map_or(0, |s| s.0.shape().1)
}

/// Phase modulus `q`, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcas_set_modulus(set: *const GcasArraySet) -> u32 {
    set.as_ref().map_or(0, |s| s.0.modulus().get())
}

/// Copies member `index` row-major into `buf`, which must hold
/// `rows * cols` values.
///
/// # Safety
/// `set` must be a live handle and `buf` must point to `buf_len` writable
/// `uint32_t` values.
#[no_mangle]
pub unsafe extern "C" fn gcas_set_member(set: *const GcasArraySet, index: usize, buf: *mut u32, buf_len: usize) -> GcasStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let member = set
            .0
            .members()
            .get(index)
            .ok_or_else(|| (GcasStatus::OutOfRange, format!("member {index} of {}", set.0.len())))?;
        let entries = member.entries();
        if buf_len < entries.len() {
            return Err((GcasStatus::BufferTooSmall, format!("need {} values, got {buf_len}", entries.len())));
        }
        ptr::copy_nonoverlapping(entries.as_ptr(), buf, entries.len());
        Ok(())
    })
}

/// Releases a set handle. Null is ignored.
///
/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcas_set_free(set: *mut GcasArraySet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Checks complementarity. Returns `GCAS_STATUS_OK` whenever the check ran;
/// the verdict is read from the report.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer. Release the
/// report with [`gcas_report_free`].
#[no_mangle]
pub unsafe extern "C" fn gcas_verify(set: *const GcasArraySet, out: *mut *mut GcasReport) -> GcasStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let report = gcas::check_gcas(&set.0).map_err(from_error)?;
        *out = Box::into_raw(Box::new(GcasReport(report)));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcas_report_is_gcas(report: *const GcasReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.is_gcas)
}

/// Autocorrelation sum at the origin. `GCAS_STATUS_NOT_GCAS` when it is not
/// a rational integer.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcas_report_peak(report: *const GcasReport, out: *mut i64) -> GcasStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = report.0.peak.ok_or_else(|| (GcasStatus::NotGcas, "peak is not an integer".to_string()))?;
        Ok(())
    })
}

/// Number of non-origin shifts with a nonzero sum.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcas_report_nonzero_count(report: *const GcasReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.nonzero_shifts.len())
}

/// Shift `(u1, u2)` of the `index`-th nonzero entry, in sorted order.
///
/// # Safety
/// `report` must be a live handle; `u1` and `u2` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gcas_report_nonzero_shift(
    report: *const GcasReport,
    index: usize,
    u1: *mut i64,
    u2: *mut i64,
) -> GcasStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        if u1.is_null() || u2.is_null() {
            return Err(null("u1/u2"));
        }
        let (s, _) = report
            .0
            .nonzero_shifts
            .get(index)
            .ok_or_else(|| (GcasStatus::OutOfRange, format!("nonzero shift {index}")))?;
        *u1 = s.u1;
        *u2 = s.u2;
        Ok(())
    })
}

/// Multi-line text rendering of the report. Free with [`gcas_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcas_report_summary(report: *const GcasReport, out: *mut *mut c_char) -> GcasStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(report.0.to_string())?;
        Ok(())
    })
}

/// Releases a report handle. Null is ignored.
///
/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcas_report_free(report: *mut GcasReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Message of the last failed call on this thread, or null. The caller owns
/// the copy and frees it with [`gcas_string_free`].
#[no_mangle]
pub extern "C" fn gcas_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |m| m.clone().into_raw()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcas_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
