//! Helpers shared by the CLI and acceptance targets.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

pub fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/examples")
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data/golden")
        .join(format!("{name}.json"))
}

pub fn fdga(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fdga"))
        .args(args)
        .arg("--deterministic")
        .current_dir(examples())
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8 report"),
    )
}

pub fn updating() -> bool {
    std::env::var_os("FDGA_UPDATE_GOLDEN").is_some()
}

pub fn check_exact(name: &str, args: &[&str], code: i32) {
    let (got_code, text) = fdga(args);
    assert_eq!(got_code, code, "{name}: {text}");
    let path = golden_path(name);
    if updating() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
    }
    let golden = std::fs::read_to_string(&path).expect("golden report present");
    assert!(
        text == golden,
        "{name}: report differs from {}",
        path.display()
    );
}

/// Same shape and strings; numbers within a relative tolerance.
pub fn close(a: &Value, b: &Value, rel: f64) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            (x - y).abs() <= rel * x.abs().max(y.abs()).max(1e-12)
        }
        (Value::Array(x), Value::Array(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(x, y)| close(x, y, rel))
        }
        (Value::Object(x), Value::Object(y)) => {
            x.len() == y.len()
                && x.iter()
                    .all(|(k, v)| y.get(k).is_some_and(|w| close(v, w, rel)))
        }
        _ => a == b,
    }
}

pub fn check_numeric(name: &str, args: &[&str], code: i32) {
    let (got_code, text) = fdga(args);
    assert_eq!(got_code, code, "{name}: {text}");
    let path = golden_path(name);
    if updating() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
    }
    let golden: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let got: Value = serde_json::from_str(&text).unwrap();
    assert!(
        close(&got, &golden, 1e-6),
        "{name}: report outside tolerance of {}",
        path.display()
    );
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Compare {
    Bytes,
    Tolerance,
}

/// Every bundled golden report: name, arguments, exit code, comparison.
pub const GOLDEN: &[(&str, &[&str], i32, Compare)] = &[
    (
        "validate-trivial",
        &["validate", "-i", "trivial.module.json"],
        0,
        Compare::Bytes,
    ),
    (
        "validate-curved",
        &["validate", "-i", "curved.module.json"],
        1,
        Compare::Bytes,
    ),
    (
        "ext-trivial",
        &["ext", "-i", "trivial.module.json"],
        0,
        Compare::Bytes,
    ),
    (
        "ext-koszul",
        &["ext", "-i", "koszul.module.json"],
        0,
        Compare::Bytes,
    ),
    ("cone", &["cone", "-i", "cone.json"], 0, Compare::Bytes),
    ("glue", &["glue", "-i", "glue.json"], 0, Compare::Bytes),
    (
        "roundtrip",
        &["roundtrip", "-i", "roundtrip.json"],
        0,
        Compare::Bytes,
    ),
    (
        "missing-input",
        &["validate", "-i", "absent.json"],
        2,
        Compare::Bytes,
    ),
    (
        "gauge-solve",
        &["gauge-solve", "-i", "gauge.json"],
        0,
        Compare::Tolerance,
    ),
    (
        "gauge-strong",
        &["gauge-solve", "-i", "gauge-strong.json"],
        1,
        Compare::Tolerance,
    ),
];

/// Runs one golden case without panicking; `Err` says what differed.
pub fn golden_matches(
    name: &str,
    args: &[&str],
    code: i32,
    compare: Compare,
) -> Result<(), String> {
    let (got_code, text) = fdga(args);
    if got_code != code {
        return Err(format!("{name}: exit {got_code}, expected {code}"));
    }
    let golden = std::fs::read_to_string(golden_path(name)).map_err(|e| format!("{name}: {e}"))?;
    let same = match compare {
        Compare::Bytes => text == golden,
        Compare::Tolerance => {
            let a: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let b: Value = serde_json::from_str(&golden).map_err(|e| e.to_string())?;
            close(&a, &b, 1e-6)
        }
    };
    if same {
        Ok(())
    } else {
        Err(format!("{name}: report differs from golden"))
    }
}
