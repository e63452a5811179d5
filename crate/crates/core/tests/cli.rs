//! End-to-end runs of the `fdga` binary against the bundled examples.
//!
//! Set `FDGA_UPDATE_GOLDEN=1` to rewrite the golden reports.

mod common;

use common::{check_exact, check_numeric, fdga};
use serde_json::Value;

#[test]
fn validate_trivial_module() {
    check_exact(
        "validate-trivial",
        &["validate", "-i", "trivial.module.json"],
        0,
    );
}

#[test]
fn validate_curved_module_fails() {
    check_exact(
        "validate-curved",
        &["validate", "-i", "curved.module.json"],
        1,
    );
}

#[test]
fn ext_trivial_module() {
    check_exact("ext-trivial", &["ext", "-i", "trivial.module.json"], 0);
}

#[test]
fn ext_koszul_module() {
    check_exact("ext-koszul", &["ext", "-i", "koszul.module.json"], 0);
}

#[test]
fn cone_of_identity() {
    check_exact("cone", &["cone", "-i", "cone.json"], 0);
}

#[test]
fn glue_triple() {
    check_exact("glue", &["glue", "-i", "glue.json"], 0);
}

#[test]
fn roundtrip_cover() {
    check_exact("roundtrip", &["roundtrip", "-i", "roundtrip.json"], 0);
}

#[test]
fn roundtrip_other_seed_is_reproducible() {
    let a = fdga(&["roundtrip", "-i", "roundtrip.json", "--seed", "9"]);
    let b = fdga(&["roundtrip", "-i", "roundtrip.json", "--seed", "9"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
}

#[test]
fn gauge_solve_example() {
    check_numeric("gauge-solve", &["gauge-solve", "-i", "gauge.json"], 0);
}

#[test]
fn gauge_solve_strong_connection_fails() {
    check_numeric(
        "gauge-strong",
        &["gauge-solve", "-i", "gauge-strong.json"],
        1,
    );
}

#[test]
fn missing_input_is_an_input_error() {
    check_exact("missing-input", &["validate", "-i", "absent.json"], 2);
}

#[test]
fn wrong_input_count_is_an_input_error() {
    let (code, text) = fdga(&["gauge-verify", "-i", "gauge.json"]);
    assert_eq!(code, 2);
    let report: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["status"], "error");
}

#[test]
fn unknown_verb_still_emits_a_report() {
    let (code, text) = fdga(&["frobnicate"]);
    assert_eq!(code, 2);
    let report: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["status"], "error");
    assert!(report["error"]["message"].is_string());
}

#[test]
fn every_report_has_every_field() {
    for args in [
        &["validate", "-i", "trivial.module.json"][..],
        &["ext", "-i", "koszul.module.json"],
        &["validate", "-i", "absent.json"],
        &["gauge-solve", "-i", "gauge-strong.json"],
    ] {
        let (_, text) = fdga(args);
        let report: Value = serde_json::from_str(&text).unwrap();
        for key in [
            "verb", "status", "seed", "config", "checks", "results", "timing", "error",
        ] {
            assert!(report.get(key).is_some(), "{args:?} lacks {key}");
        }
    }
}

#[test]
fn gauge_solution_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solution.json");
    let out = out.to_str().unwrap();
    let (code, _) = fdga(&["gauge-solve", "-i", "gauge.json", "-o", out]);
    assert_eq!(code, 0);
    assert!(dir.path().join("solution.g1-0.gmf").exists());
    let (code, text) = fdga(&["gauge-verify", "-i", "gauge.json", "-i", out]);
    assert_eq!(code, 0, "{text}");
    let report: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn grid_override_resamples() {
    let (code, text) = fdga(&["gauge-solve", "-i", "gauge.json", "--grid", "256"]);
    assert_eq!(code, 0, "{text}");
    let report: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["config"]["grid"]["resolution"], 256);
}

#[test]
fn tight_tolerance_turns_residuals_into_failures() {
    let (code, text) = fdga(&["gauge-solve", "-i", "gauge.json", "--tol", "1e-9"]);
    assert_eq!(code, 1, "{text}");
}

#[test]
fn published_report_schema_lists_every_report_field() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas");
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("report.schema.json")).unwrap())
            .unwrap();
    let (_, text) = fdga(&["validate", "-i", "trivial.module.json"]);
    let report: Value = serde_json::from_str(&text).unwrap();
    let mut required: Vec<&str> = schema["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let mut present: Vec<&str> = report
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    required.sort_unstable();
    present.sort_unstable();
    assert_eq!(required, present);
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        serde_json::from_str::<Value>(&std::fs::read_to_string(&path).unwrap())
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
