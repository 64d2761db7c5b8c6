//! C ABI for the `ltsi` checker.
//!
//! Systems are opaque `LtsiSystem` handles created by `ltsi_parse` or
//! `ltsi_compile_term` and released with `ltsi_free`. Every fallible call
//! returns an `LtsiError`; on failure `ltsi_last_error` describes the cause
//! for the calling thread. Strings handed out by the library are released
//! with `ltsi_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use ltsi::calculus;
use ltsi::format::{emit_ltsi, parse_ltsi};
use ltsi::model::{Ltsi, Path};
use ltsi::paths::{self, EquivDecision};
use ltsi::report::{self, CheckId, CheckOptions};
use ltsi::verdict::Status;

/// Opaque handle to a parsed system.
pub struct LtsiSystem {
    ltsi: Ltsi,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LtsiError {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnknownCheck = 4,
    InvalidPath = 5,
    Unsupported = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LtsiStatus {
    Holds = 0,
    HoldsDerived = 1,
    HoldsBounded = 2,
    Fails = 3,
    Unknown = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LtsiEquiv {
    Yes = 0,
    No = 1,
    Undecided = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(code: LtsiError, msg: impl Into<String>) -> LtsiError {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
    code
}

fn guard(f: impl FnOnce() -> Result<(), LtsiError>) -> LtsiError {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(Ok(())) => LtsiError::Ok,
        Ok(Err(code)) => code,
        Err(_) => set_error(LtsiError::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, LtsiError> {
    if p.is_null() {
        return Err(set_error(LtsiError::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| set_error(LtsiError::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn sys<'a>(h: *const LtsiSystem) -> Result<&'a LtsiSystem, LtsiError> {
    h.as_ref()
        .ok_or_else(|| set_error(LtsiError::NullPointer, "system handle is null"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), LtsiError> {
    if out.is_null() {
        return Err(set_error(LtsiError::NullPointer, "output pointer is null"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), LtsiError> {
    let c = CString::new(s).map_err(|_| set_error(LtsiError::Panic, "output contains NUL"))?;
    put(out, c.into_raw())
}

/// Parses `.ltsi` text into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ltsi_parse(text: *const c_char, out: *mut *mut LtsiSystem) -> LtsiError {
    guard(|| {
        let text = str_arg(text, "text")?;
        let ltsi = parse_ltsi(text).map_err(|e| set_error(LtsiError::Parse, e.to_string()))?;
        put(out, Box::into_raw(Box::new(LtsiSystem { ltsi })))
    })
}

/// Compiles a process term such as `a.0|b.0`.
///
/// # Safety
/// `term` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ltsi_compile_term(term: *const c_char, out: *mut *mut LtsiSystem) -> LtsiError {
    guard(|| {
        let term = str_arg(term, "term")?;
        let t = calculus::parse_term(term).map_err(|e| set_error(LtsiError::Parse, e.to_string()))?;
        let c = calculus::compile(&t).map_err(|e| set_error(LtsiError::Unsupported, e.to_string()))?;
        put(out, Box::into_raw(Box::new(LtsiSystem { ltsi: c.ltsi })))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ltsi_free(h: *mut LtsiSystem) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ltsi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ltsi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Number of states, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltsi_state_count(h: *const LtsiSystem) -> usize {
    h.as_ref().map_or(0, |s| s.ltsi.n_states())
}

/// Number of forward transitions, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltsi_transition_count(h: *const LtsiSystem) -> usize {
    h.as_ref().map_or(0, |s| s.ltsi.n_forward())
}

/// Runs one named check (`SP`, `IRE`, `CS_i`, `PREREV`, ...) with default
/// bounds and writes its status.
///
/// # Safety
/// `h` must be a live handle, `check` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ltsi_check(h: *const LtsiSystem, check: *const c_char, out: *mut LtsiStatus) -> LtsiError {
    guard(|| {
        let s = sys(h)?;
        let name = str_arg(check, "check")?;
        let id: CheckId = name.parse().map_err(|e: String| set_error(LtsiError::UnknownCheck, e))?;
        let opts = CheckOptions {
            only: Some(vec![id]),
            ..CheckOptions::default()
        };
        let a = report::run_checks(&s.ltsi, &opts);
        let v = a.get(id).expect("requested check ran");
        put(
            out,
            match v.status {
                Status::Holds => LtsiStatus::Holds,
                Status::Derived(_) => LtsiStatus::HoldsDerived,
                Status::Bounded(_) => LtsiStatus::HoldsBounded,
                Status::Fails => LtsiStatus::Fails,
                Status::Unknown => LtsiStatus::Unknown,
            },
        )
    })
}

/// Full report in the tab-separated format, one `RESULT` line per check.
///
/// # Safety
/// `h` must be a live handle and `out` valid; free the result with
/// `ltsi_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ltsi_report_tsv(h: *const LtsiSystem, out: *mut *mut c_char) -> LtsiError {
    guard(|| {
        let s = sys(h)?;
        let a = report::run_checks(&s.ltsi, &CheckOptions::default());
        put_string(out, report::render_tsv(&a))
    })
}

/// Canonical `.ltsi` text of the system.
///
/// # Safety
/// `h` must be a live handle and `out` valid; free the result with
/// `ltsi_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ltsi_emit(h: *const LtsiSystem, out: *mut *mut c_char) -> LtsiError {
    guard(|| {
        let s = sys(h)?;
        put_string(out, emit_ltsi(&s.ltsi, &[], None))
    })
}

/// Decides causal equivalence of two coinitial paths given as
/// space-separated transition ids (`~id` for reverse). Both paths start
/// at the source of their first step; an empty path takes the other's.
///
/// # Safety
/// `h` must be a live handle, `r` and `s` NUL-terminated strings, `out`
/// valid.
#[no_mangle]
pub unsafe extern "C" fn ltsi_equiv(
    h: *const LtsiSystem,
    r: *const c_char,
    s: *const c_char,
    slack: usize,
    out: *mut LtsiEquiv,
) -> LtsiError {
    guard(|| {
        let l = &sys(h)?.ltsi;
        let (r, s) = (str_arg(r, "r")?, str_arg(s, "s")?);
        let first = |p: &str| p.split_whitespace().next().and_then(|t| l.parse_ref(t)).map(|t| l.src(t));
        let start = first(r).or_else(|| first(s));
        let parse = |p: &str| Path::parse(l, p, start).map_err(|e| set_error(LtsiError::InvalidPath, format!("`{p}`: {e}")));
        let (r, s) = (parse(r)?, parse(s)?);
        let d = paths::causally_equivalent(l, &r, &s, slack).map_err(|e| set_error(LtsiError::Unsupported, e.to_string()))?;
        put(
            out,
            match d {
                EquivDecision::Yes(_) => LtsiEquiv::Yes,
                EquivDecision::No(_) => LtsiEquiv::No,
                EquivDecision::Unknown => LtsiEquiv::Undecided,
            },
        )
    })
}
