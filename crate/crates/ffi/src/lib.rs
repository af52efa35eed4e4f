//! C ABI over `rlens-core`.
//!
//! An engine is an opaque handle from [`rlens_engine_new`]. Every call returns an
//! [`RlensStatus`]; on failure [`rlens_last_error_message`] describes it. Strings
//! returned through `out` pointers are owned by the caller and released with
//! [`rlens_string_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use rlens_core::api::{canonical_json, parse_filter, ApiError, Engine, ErrorCode};
use rlens_core::config::Config;
use rlens_core::store::{parse_session, SessionStore, StoreError};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlensStatus {
    Ok = 0,
    /// A required pointer was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed document, parameter or configuration.
    SchemaError = 3,
    Duplicate = 4,
    UnknownLearner = 5,
    InvalidRange = 6,
    /// I/O failure or a caught panic.
    Internal = 7,
}

/// Opaque engine handle.
pub struct RlensEngine {
    engine: Engine,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(RlensStatus, String);

impl From<ApiError> for Failure {
    fn from(e: ApiError) -> Self {
        let status = match e.code {
            ErrorCode::SchemaError => RlensStatus::SchemaError,
            ErrorCode::Duplicate => RlensStatus::Duplicate,
            ErrorCode::UnknownLearner => RlensStatus::UnknownLearner,
            ErrorCode::InvalidRange => RlensStatus::InvalidRange,
            ErrorCode::EmptySelection | ErrorCode::Internal => RlensStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        ApiError::from(e).into()
    }
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RlensStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RlensStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            RlensStatus::Internal
        }
    }
}

/// # Safety
/// `p` is null or a NUL-terminated string valid for the duration of the call.
unsafe fn opt_str<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p).to_str().map(Some).map_err(|_| Failure(RlensStatus::InvalidUtf8, format!("{name}: not UTF-8")))
}

unsafe fn req_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    opt_str(p, name)?.ok_or_else(|| Failure(RlensStatus::NullArgument, format!("{name} is null")))
}

unsafe fn engine<'a>(p: *const RlensEngine) -> Result<&'a Engine, Failure> {
    p.as_ref().map(|h| &h.engine).ok_or_else(|| Failure(RlensStatus::NullArgument, "engine is null".into()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(RlensStatus::NullArgument, "out is null".into()));
    }
    let c = CString::new(s).map_err(|e| Failure(RlensStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// `{"key": "value", ...}`; null means no parameters.
fn params(json: Option<&str>) -> Result<BTreeMap<String, String>, Failure> {
    match json {
        None => Ok(BTreeMap::new()),
        Some(text) => serde_json::from_str(text)
            .map_err(|e| Failure(RlensStatus::SchemaError, format!("params: expected an object of strings: {e}"))),
    }
}

/// Creates an engine. `data_dir` null keeps sessions in memory; `config_toml`
/// null uses defaults.
///
/// # Safety
/// String arguments are null or NUL-terminated; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rlens_engine_new(
    data_dir: *const c_char,
    config_toml: *const c_char,
    out: *mut *mut RlensEngine,
) -> RlensStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(RlensStatus::NullArgument, "out is null".into()));
        }
        let config = match opt_str(config_toml, "config_toml")? {
            Some(text) => Config::from_toml(text).map_err(|e| Failure(RlensStatus::SchemaError, e.to_string()))?,
            None => Config::default(),
        };
        let store = match opt_str(data_dir, "data_dir")? {
            Some(dir) => SessionStore::open(PathBuf::from(dir))?,
            None => SessionStore::in_memory(),
        };
        let engine = Engine::new(store, config)?;
        *out = Box::into_raw(Box::new(RlensEngine { engine }));
        Ok(())
    })
}

/// Releases an engine; null is ignored.
///
/// # Safety
/// `engine` is null or a handle from [`rlens_engine_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rlens_engine_free(engine: *mut RlensEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Validates and stores one session document. `session_index` may be null.
///
/// # Safety
/// `engine` is a live handle, `json` NUL-terminated, `session_index` null or valid.
#[no_mangle]
pub unsafe extern "C" fn rlens_ingest_json(
    engine: *const RlensEngine,
    json: *const c_char,
    session_index: *mut u32,
) -> RlensStatus {
    guard(|| {
        let ack = self::engine(engine)?.ingest_json(req_str(json, "json")?)?;
        if let Some(out) = session_index.as_mut() {
            *out = ack.session_index;
        }
        Ok(())
    })
}

/// Checks a session document without storing it.
///
/// # Safety
/// `json` is NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn rlens_validate_json(json: *const c_char) -> RlensStatus {
    guard(|| {
        parse_session(req_str(json, "json")?)?;
        Ok(())
    })
}

/// A learner view as canonical JSON; `view` is `overview`, `corrections`,
/// `suggestions`, `suggestions/<category>/<tutor>`, `transcript/<session>` or
/// `filters`. `params_json` (nullable) holds filter and view parameters.
///
/// # Safety
/// `engine` is a live handle, strings are NUL-terminated, `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn rlens_view_json(
    engine: *const RlensEngine,
    learner_id: *const c_char,
    view: *const c_char,
    params_json: *const c_char,
    out: *mut *mut c_char,
) -> RlensStatus {
    guard(|| {
        let e = self::engine(engine)?;
        let p = params(opt_str(params_json, "params_json")?)?;
        let body = e.view_json(req_str(learner_id, "learner_id")?, req_str(view, "view")?, &p)?;
        write_string(out, body)
    })
}

/// The full report document as canonical JSON, stamped with `generated_at_unix`
/// (seconds since the epoch).
///
/// # Safety
/// `engine` is a live handle, strings are NUL-terminated, `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn rlens_report_json(
    engine: *const RlensEngine,
    learner_id: *const c_char,
    params_json: *const c_char,
    generated_at_unix: i64,
    out: *mut *mut c_char,
) -> RlensStatus {
    guard(|| {
        let e = self::engine(engine)?;
        let filter = parse_filter(&params(opt_str(params_json, "params_json")?)?)?;
        let at = chrono::DateTime::from_timestamp(generated_at_unix, 0)
            .ok_or_else(|| Failure(RlensStatus::InvalidRange, "generated_at_unix out of range".into()))?;
        let doc = e.report(req_str(learner_id, "learner_id")?, &filter, at)?;
        write_string(out, canonical_json(&doc))
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` is null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rlens_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until the next
/// call on the same thread.
#[no_mangle]
pub extern "C" fn rlens_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn rlens_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
