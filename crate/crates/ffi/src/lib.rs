//! C ABI over the `transproj` library.
//!
//! Documents cross the boundary as JSON strings, parsed objects as opaque
//! handles. Every fallible call returns a [`TpStatus`]; the message of the
//! last failure on the calling thread is available from [`tp_last_error`].
//! Strings handed out by the library are freed with [`tp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use transproj::cli::corpus::CheckOptions;
use transproj::cli::doc::TripleDoc;
use transproj::cli::{dispatch, error_report, SessionDocument};
use transproj::reduction::{normalize, ReduceOptions};
use transproj::triple::{ProjectiveTriple, Section};
use transproj::Error;

/// Status codes; the values match the command-line exit codes where both
/// exist.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TpStatus {
    Ok = 0,
    /// The call ran but its report says `"ok": false`.
    Failed = 1,
    /// Malformed input or a violated precondition.
    Invalid = 2,
    NeedsExtension = 3,
    BudgetExceeded = 4,
    NullArgument = 5,
    InvalidUtf8 = 6,
    /// A bug: the library panicked.
    Panic = 7,
}

/// A parsed session document.
pub struct TpSession {
    doc: SessionDocument,
}

/// A projective triple `(α, β, γ)` with its section.
pub struct TpTriple {
    triple: ProjectiveTriple,
    section: Section,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(TpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NeedsExtension(_) => TpStatus::NeedsExtension,
            Error::BudgetExceeded(_) => TpStatus::BudgetExceeded,
            _ => TpStatus::Invalid,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<TpStatus, Failure>) -> TpStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Failure(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            TpStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(TpStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TpStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(TpStatus::NullArgument, format!("{what} is null")))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("nul bytes removed")
        .into_raw()
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn tp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn tp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Free a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a JSON session document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tp_session_parse(
    json: *const c_char,
    out_session: *mut *mut TpSession,
) -> TpStatus {
    guard(|| {
        let slot = out(out_session, "out_session")?;
        *slot = ptr::null_mut();
        let doc = SessionDocument::from_json(text(json, "json")?)?;
        *slot = Box::into_raw(Box::new(TpSession { doc }));
        Ok(TpStatus::Ok)
    })
}

/// # Safety
/// `session` must come from [`tp_session_parse`] (or be null).
#[no_mangle]
pub unsafe extern "C" fn tp_session_free(session: *mut TpSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Run a verb on a session. `options_json` (nullable) takes the keys
/// `chart`, `extension`, `seed`, `component`, `polar`, `degree`. The JSON
/// report (or diagnostic) is written to `out_report` in every case except
/// null arguments, and must be freed with [`tp_string_free`].
///
/// # Safety
/// Pointers must be valid; strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn tp_session_run(
    session: *const TpSession,
    verb: *const c_char,
    options_json: *const c_char,
    out_report: *mut *mut c_char,
) -> TpStatus {
    guard(|| {
        let slot = out(out_report, "out_report")?;
        *slot = ptr::null_mut();
        let session = session
            .as_ref()
            .ok_or_else(|| Failure(TpStatus::NullArgument, "session is null".into()))?;
        let verb = text(verb, "verb")?;
        let opts: CheckOptions = if options_json.is_null() {
            CheckOptions::default()
        } else {
            serde_json::from_str(text(options_json, "options_json")?)
                .map_err(|e| Failure(TpStatus::Invalid, format!("options: {e}")))?
        };
        let (report, status) = match dispatch(verb, &session.doc, &opts.options()) {
            Ok(r) => {
                let s = if r.get("ok") == Some(&serde_json::Value::Bool(false)) {
                    TpStatus::Failed
                } else {
                    TpStatus::Ok
                };
                (r, s)
            }
            Err(e) => {
                let r = error_report(&e);
                let f = Failure::from(e);
                set_error(&f.1);
                (r, f.0)
            }
        };
        *slot = c_string(serde_json::to_string(&report).expect("reports serialize"));
        Ok(status)
    })
}

/// The triple and section of a session (section `[1 : 0]` when absent).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tp_session_triple(
    session: *const TpSession,
    out_triple: *mut *mut TpTriple,
) -> TpStatus {
    guard(|| {
        let slot = out(out_triple, "out_triple")?;
        *slot = ptr::null_mut();
        let session = session
            .as_ref()
            .ok_or_else(|| Failure(TpStatus::NullArgument, "session is null".into()))?;
        let triple = session.doc.triple()?;
        let section = session.doc.section(&triple)?;
        *slot = Box::into_raw(Box::new(TpTriple { triple, section }));
        Ok(TpStatus::Ok)
    })
}

/// # Safety
/// `triple` must come from this library (or be null).
#[no_mangle]
pub unsafe extern "C" fn tp_triple_free(triple: *mut TpTriple) {
    if !triple.is_null() {
        drop(Box::from_raw(triple));
    }
}

unsafe fn triple_ref<'a>(t: *const TpTriple) -> Result<&'a TpTriple, Failure> {
    t.as_ref()
        .ok_or_else(|| Failure(TpStatus::NullArgument, "triple is null".into()))
}

/// Whether the three integrability relations hold exactly.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tp_triple_is_integrable(
    triple: *const TpTriple,
    out_flag: *mut bool,
) -> TpStatus {
    guard(|| {
        *out(out_flag, "out_flag")? = triple_ref(triple)?.triple.is_integrable();
        Ok(TpStatus::Ok)
    })
}

/// Degree of the affine polar divisor, `Σ k · deg F`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tp_triple_polar_degree(
    triple: *const TpTriple,
    out_degree: *mut u32,
) -> TpStatus {
    guard(|| {
        *out(out_degree, "out_degree")? = triple_ref(triple)?.triple.polar_divisor().degree();
        Ok(TpStatus::Ok)
    })
}

/// Content digest of the triple (hex SHA-256 of its canonical form).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tp_triple_digest(
    triple: *const TpTriple,
    out_digest: *mut *mut c_char,
) -> TpStatus {
    guard(|| {
        let slot = out(out_digest, "out_digest")?;
        *slot = c_string(triple_ref(triple)?.triple.digest());
        Ok(TpStatus::Ok)
    })
}

/// The triple as a JSON triple document.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tp_triple_to_json(
    triple: *const TpTriple,
    out_json: *mut *mut c_char,
) -> TpStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        let doc = TripleDoc::from_triple(&triple_ref(triple)?.triple);
        *slot = c_string(serde_json::to_string(&doc).expect("documents serialize"));
        Ok(TpStatus::Ok)
    })
}

/// Normal form of `(triple, section)`; `out_transcript` (nullable)
/// receives the JSON transcript of moves.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tp_triple_normalize(
    triple: *const TpTriple,
    iteration_cap: u32,
    out_normal: *mut *mut TpTriple,
    out_transcript: *mut *mut c_char,
) -> TpStatus {
    guard(|| {
        let slot = out(out_normal, "out_normal")?;
        *slot = ptr::null_mut();
        let t = triple_ref(triple)?;
        let mut opts = ReduceOptions::default();
        if iteration_cap > 0 {
            opts.iteration_cap = iteration_cap as usize;
        }
        let (nf, section, tr) = normalize(&t.triple, &t.section, opts)?;
        if let Some(ts) = out_transcript.as_mut() {
            *ts = c_string(serde_json::to_string(&tr).expect("transcripts serialize"));
        }
        *slot = Box::into_raw(Box::new(TpTriple {
            triple: nf,
            section,
        }));
        Ok(TpStatus::Ok)
    })
}

/// `deg_polar − (deg_foliation + 2)`.
#[no_mangle]
pub extern "C" fn tp_eccentricity(deg_polar: i64, deg_foliation: i64) -> i64 {
    transproj::plane::eccentricity(deg_polar, deg_foliation).eccentricity
}
