//! C ABI over `formal-dolbeault`.
//!
//! Conventions:
//!
//! * Every fallible function returns an [`FdStatus`]; outputs go through
//!   pointer arguments and are only written on `FD_STATUS_OK`.
//! * After a failure, [`fd_last_error_message`] describes it. The message
//!   is thread-local and valid until the next call on the same thread.
//! * Modules are opaque [`FdModule`] handles, released with
//!   [`fd_module_free`]. Strings returned by the library are released with
//!   [`fd_string_free`].
//! * Panics never cross the boundary; they surface as
//!   `FD_STATUS_INTERNAL`.
//!
//! The header `include/formal_dolbeault.h` is generated by `build.rs`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;
use std::sync::Arc;

use formal_dolbeault::cli::{run, Args, Verb, DEFAULT_SEED};
use formal_dolbeault::cohesive::{ext_dims, CohesiveModule, ModuleDoc};
use formal_dolbeault::gauge::with_worker_limit;
use formal_dolbeault::Error;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Io = 4,
    ModelMismatch = 5,
    NotClosed = 6,
    NotEquivalence = 7,
    InfiniteDimensional = 8,
    SolverFailed = 9,
    Internal = 10,
}

impl From<&Error> for FdStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Io(_) => FdStatus::Io,
            Error::ModelMismatch(_)
            | Error::QuotientSpaceUnsupported
            | Error::UnsupportedDimension(_) => FdStatus::ModelMismatch,
            Error::NotClosed | Error::WrongDegree { .. } => FdStatus::NotClosed,
            Error::NotHomotopyEquivalence => FdStatus::NotEquivalence,
            Error::InfiniteDimensionalBackend => FdStatus::InfiniteDimensional,
            Error::NotContractive(_)
            | Error::MaxIterExceeded(_)
            | Error::SingularGauge(_)
            | Error::MissingLowerOrder(_) => FdStatus::SolverFailed,
            Error::DivisionByZero
            | Error::LeibnizViolation(_)
            | Error::ShapeMismatch(_)
            | Error::Invalid(_) => FdStatus::InvalidInput,
        }
    }
}

/// Opaque handle to an immutable cohesive module.
pub struct FdModule {
    inner: Arc<CohesiveModule>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

/// Runs `body`, records any failure and converts panics.
fn guarded(body: impl FnOnce() -> Result<(), (FdStatus, String)>) -> FdStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FdStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FdStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (FdStatus, String) {
    (FdStatus::from(&e), e.to_string())
}

fn null(what: &str) -> (FdStatus, String) {
    (FdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (FdStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (FdStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn to_c_string(s: String) -> Result<*mut c_char, (FdStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (FdStatus::Internal, "output contains a NUL byte".into()))
}

unsafe fn module_ref<'a>(
    m: *const FdModule,
    what: &str,
) -> Result<&'a FdModule, (FdStatus, String)> {
    m.as_ref().ok_or_else(|| null(what))
}

/// Parses a module document (`{config, ranks, connection}`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_module_from_json(
    json: *const c_char,
    out: *mut *mut FdModule,
) -> FdStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let doc: ModuleDoc = serde_json::from_str(text)
            .map_err(|e| (FdStatus::InvalidInput, format!("module document: {e}")))?;
        let module = CohesiveModule::from_doc(&doc).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(FdModule {
            inner: Arc::new(module),
        }));
        Ok(())
    })
}

/// Releases a handle from [`fd_module_from_json`]. Null is ignored.
///
/// # Safety
/// `module` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fd_module_free(module: *mut FdModule) {
    if !module.is_null() {
        drop(Box::from_raw(module));
    }
}

/// Writes the module back as a JSON document.
///
/// # Safety
/// `module` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_module_to_json(
    module: *const FdModule,
    out: *mut *mut c_char,
) -> FdStatus {
    guarded(|| {
        let m = module_ref(module, "module")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = serde_json::to_string(&m.inner.to_doc())
            .map_err(|e| (FdStatus::Internal, e.to_string()))?;
        *out = to_c_string(text)?;
        Ok(())
    })
}

/// Sum of the ranks of the module in all degrees.
///
/// # Safety
/// `module` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_module_total_rank(
    module: *const FdModule,
    out: *mut usize,
) -> FdStatus {
    guarded(|| {
        let m = module_ref(module, "module")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = m.inner.total_rank();
        Ok(())
    })
}

/// Checks the Leibniz rule and flatness (`E o E = 0`).
///
/// # Safety
/// `module` must be a live handle; both flags must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_check_module(
    module: *const FdModule,
    leibniz: *mut bool,
    flat: *mut bool,
) -> FdStatus {
    guarded(|| {
        let m = module_ref(module, "module")?;
        if leibniz.is_null() || flat.is_null() {
            return Err(null("output flag"));
        }
        let l = m.inner.check_leibniz();
        let f = l && m.inner.check_integrability().map_err(lib_err)?;
        *leibniz = l;
        *flat = f;
        Ok(())
    })
}

/// Ext dimensions between two modules as a JSON report
/// (`{degrees, euler_characteristic, euler_cohomology}`). A null `target`
/// means `source`.
///
/// # Safety
/// `source` must be a live handle, `target` null or a live handle, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fd_ext_dims_json(
    source: *const FdModule,
    target: *const FdModule,
    out: *mut *mut c_char,
) -> FdStatus {
    guarded(|| {
        let e = module_ref(source, "source")?;
        let f = if target.is_null() {
            e
        } else {
            module_ref(target, "target")?
        };
        if out.is_null() {
            return Err(null("out"));
        }
        let report = ext_dims(&e.inner, &f.inner).map_err(lib_err)?;
        let text =
            serde_json::to_string(&report).map_err(|e| (FdStatus::Internal, e.to_string()))?;
        *out = to_c_string(text)?;
        Ok(())
    })
}

/// Runs one command-line verb (`"validate"`, `"ext"`, `"cone"`, `"glue"`,
/// `"roundtrip"`, `"gauge-solve"`, `"gauge-verify"`) on input files and
/// returns its JSON report with the exit code the binary would use.
///
/// Returns `FD_STATUS_OK` whenever a report was produced, including reports
/// whose checks fail; inspect `exit_code`.
///
/// # Safety
/// `verb` must be a NUL-terminated string; `inputs` must point to
/// `n_inputs` NUL-terminated strings; `report` and `exit_code` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fd_run(
    verb: *const c_char,
    inputs: *const *const c_char,
    n_inputs: usize,
    seed: u64,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> FdStatus {
    guarded(|| {
        let name = read_str(verb, "verb")?;
        let verb = Verb::from_name(name)
            .ok_or_else(|| (FdStatus::InvalidInput, format!("unknown verb {name:?}")))?;
        if report.is_null() || exit_code.is_null() {
            return Err(null("output"));
        }
        if n_inputs > 0 && inputs.is_null() {
            return Err(null("inputs"));
        }
        let paths = (0..n_inputs)
            .map(|i| read_str(*inputs.add(i), "input path").map(PathBuf::from))
            .collect::<Result<Vec<_>, _>>()?;
        let args = Args {
            verb,
            inputs: paths,
            output: None,
            seed,
            tol: None,
            grid: None,
            deterministic: true,
        };
        let r = with_worker_limit(|| run(&args));
        *report = to_c_string(r.to_json())?;
        *exit_code = r.status.exit_code();
        Ok(())
    })
}

/// `gauge-solve` on a problem file. `residual_tol <= 0` selects the default
/// threshold.
///
/// # Safety
/// As for [`fd_run`].
#[no_mangle]
pub unsafe extern "C" fn fd_gauge_solve_json(
    problem_path: *const c_char,
    residual_tol: f64,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> FdStatus {
    guarded(|| {
        let path = read_str(problem_path, "problem_path")?;
        if report.is_null() || exit_code.is_null() {
            return Err(null("output"));
        }
        let args = Args {
            verb: Verb::GaugeSolve,
            inputs: vec![PathBuf::from(path)],
            output: None,
            seed: DEFAULT_SEED,
            tol: (residual_tol > 0.0).then_some(residual_tol),
            grid: None,
            deterministic: true,
        };
        let r = with_worker_limit(|| run(&args));
        *report = to_c_string(r.to_json())?;
        *exit_code = r.status.exit_code();
        Ok(())
    })
}

/// Message for the last failure on this thread, or null.
#[no_mangle]
pub extern "C" fn fd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn fd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
