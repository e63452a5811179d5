use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use formal_dolbeault_ffi::*;
use serde_json::Value;

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/examples")
}

fn example_text(name: &str) -> CString {
    CString::new(std::fs::read_to_string(examples().join(name)).unwrap()).unwrap()
}

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { fd_string_free(p) };
    s
}

fn last_error() -> String {
    let p = fd_last_error_message();
    assert!(!p.is_null(), "an error message is recorded");
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn load(name: &str) -> *mut FdModule {
    let mut m = ptr::null_mut();
    let json = example_text(name);
    assert_eq!(
        unsafe { fd_module_from_json(json.as_ptr(), &mut m) },
        FdStatus::Ok
    );
    m
}

#[test]
fn module_handle_life_cycle() {
    let m = load("koszul.module.json");
    let mut rank = 0usize;
    assert_eq!(unsafe { fd_module_total_rank(m, &mut rank) }, FdStatus::Ok);
    assert_eq!(rank, 2);
    let (mut leibniz, mut flat) = (false, false);
    assert_eq!(
        unsafe { fd_check_module(m, &mut leibniz, &mut flat) },
        FdStatus::Ok
    );
    assert!(leibniz && flat);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fd_module_to_json(m, &mut out) }, FdStatus::Ok);
    let text = CString::new(take_string(out)).unwrap();
    let mut again = ptr::null_mut();
    assert_eq!(
        unsafe { fd_module_from_json(text.as_ptr(), &mut again) },
        FdStatus::Ok
    );
    unsafe {
        fd_module_free(again);
        fd_module_free(m);
        fd_module_free(ptr::null_mut());
    }
}

#[test]
fn curved_module_is_not_flat() {
    let m = load("curved.module.json");
    let (mut leibniz, mut flat) = (false, true);
    assert_eq!(
        unsafe { fd_check_module(m, &mut leibniz, &mut flat) },
        FdStatus::Ok
    );
    assert!(leibniz && !flat);
    unsafe { fd_module_free(m) };
}

#[test]
fn ext_dimensions_of_the_koszul_module() {
    let m = load("koszul.module.json");
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { fd_ext_dims_json(m, ptr::null(), &mut out) },
        FdStatus::Ok
    );
    let report: Value = serde_json::from_str(&take_string(out)).unwrap();
    let dims: Vec<(i64, u64)> = report["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| {
            (
                d["degree"].as_i64().unwrap(),
                d["cohomology"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(dims, vec![(-1, 3), (0, 6), (1, 3)]);
    unsafe { fd_module_free(m) };
}

#[test]
fn errors_are_reported_with_codes_and_messages() {
    let mut m = ptr::null_mut();
    let bad = CString::new("{\"ranks\": 3}").unwrap();
    assert_eq!(
        unsafe { fd_module_from_json(bad.as_ptr(), &mut m) },
        FdStatus::InvalidInput
    );
    assert!(m.is_null());
    assert!(last_error().contains("module document"));

    assert_eq!(
        unsafe { fd_module_from_json(ptr::null(), &mut m) },
        FdStatus::NullPointer
    );
    let mut rank = 0usize;
    assert_eq!(
        unsafe { fd_module_total_rank(ptr::null(), &mut rank) },
        FdStatus::NullPointer
    );

    let disc = CString::new(
        r#"{"config":{"m":1,"n":1,"r":2,"d_cap":2,"backend":"poly-base"},"ranks":{"0":1},"connection":[]}"#,
    )
    .unwrap();
    assert_eq!(
        unsafe { fd_module_from_json(disc.as_ptr(), &mut m) },
        FdStatus::Ok
    );
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { fd_ext_dims_json(m, m, &mut out) },
        FdStatus::InfiniteDimensional
    );
    assert!(out.is_null());
    unsafe { fd_module_free(m) };
}

#[test]
fn successful_calls_clear_the_error() {
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { fd_module_from_json(ptr::null(), &mut m) },
        FdStatus::NullPointer
    );
    let m = load("trivial.module.json");
    assert!(fd_last_error_message().is_null());
    unsafe { fd_module_free(m) };
}

#[test]
fn run_reports_exit_codes() {
    let dir = examples();
    let cases = [
        ("validate", "trivial.module.json", 0),
        ("validate", "curved.module.json", 1),
        ("validate", "absent.json", 2),
    ];
    for (verb, input, code) in cases {
        let verb = CString::new(verb).unwrap();
        let path = CString::new(dir.join(input).to_str().unwrap()).unwrap();
        let inputs = [path.as_ptr()];
        let (mut report, mut exit) = (ptr::null_mut(), -1);
        let status = unsafe {
            fd_run(
                verb.as_ptr(),
                inputs.as_ptr(),
                1,
                42,
                &mut report,
                &mut exit,
            )
        };
        assert_eq!(status, FdStatus::Ok);
        assert_eq!(exit, code, "{input}");
        let report: Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(report["verb"], "validate");
    }
    let unknown = CString::new("frobnicate").unwrap();
    let (mut report, mut exit) = (ptr::null_mut(), -1);
    let status = unsafe { fd_run(unknown.as_ptr(), ptr::null(), 0, 42, &mut report, &mut exit) };
    assert_eq!(status, FdStatus::InvalidInput);
}

#[test]
fn gauge_solve_through_the_c_abi() {
    let path = CString::new(examples().join("gauge.json").to_str().unwrap()).unwrap();
    let (mut report, mut exit) = (ptr::null_mut(), -1);
    assert_eq!(
        unsafe { fd_gauge_solve_json(path.as_ptr(), 0.0, &mut report, &mut exit) },
        FdStatus::Ok
    );
    assert_eq!(exit, 0);
    let report: Value = serde_json::from_str(&take_string(report)).unwrap();
    for check in report["checks"].as_array().unwrap() {
        assert_eq!(check["passed"], true, "{check}");
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(fd_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api_and_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/formal_dolbeault.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for symbol in [
        "typedef struct FdModule FdModule;",
        "FD_STATUS_OK = 0",
        "FD_STATUS_INTERNAL = 10",
        "fd_module_from_json",
        "fd_module_free",
        "fd_check_module",
        "fd_ext_dims_json",
        "fd_run",
        "fd_gauge_solve_json",
        "fd_last_error_message",
        "fd_string_free",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
    // syntax-check with the system C compiler when one is available
    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("use_header.c");
    std::fs::write(
        &source,
        "#include \"formal_dolbeault.h\"\nint main(void) { return fd_version() == 0; }\n",
    )
    .unwrap();
    let Ok(output) = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&source)
        .output()
    else {
        return;
    };
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
}
