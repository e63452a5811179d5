use serde::Serialize;
use serde_json::Value;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    /// Process exit code: 0 pass, 1 check failure, 2 input error.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

/// One evaluated invariant. Numeric checks carry the tolerance they were
/// judged against.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: Value,
    pub tolerance: Option<f64>,
}

impl Check {
    pub fn exact(name: impl Into<String>, passed: bool, measured: impl Serialize) -> Self {
        Check {
            name: name.into(),
            passed,
            measured: serde_json::to_value(measured).unwrap_or(Value::Null),
            tolerance: None,
        }
    }

    /// Passes when `measured <= tolerance`.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            passed: measured <= tolerance,
            measured: serde_json::json!(measured),
            tolerance: Some(tolerance),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for Diagnostic {
    fn from(e: &Error) -> Self {
        let kind = format!("{e:?}");
        let kind = kind
            .split(|c: char| !c.is_alphanumeric())
            .next()
            .unwrap_or_default()
            .to_string();
        Diagnostic {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// The single JSON document every run emits. All fields are present for
/// every verb; `error` is null unless the status is `error`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub verb: String,
    pub status: Status,
    pub seed: u64,
    pub config: Value,
    pub checks: Vec<Check>,
    pub results: Value,
    pub timing: Timing,
    pub error: Option<Diagnostic>,
}

impl Report {
    pub fn new(verb: &str, seed: u64) -> Self {
        Report {
            verb: verb.to_string(),
            status: Status::Pass,
            seed,
            config: Value::Null,
            checks: Vec::new(),
            results: Value::Null,
            timing: Timing { elapsed_ms: 0.0 },
            error: None,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Sets the status from the checks unless an error was recorded.
    pub fn finish(&mut self) {
        if self.error.is_none() {
            self.status = if self.checks.iter().all(|c| c.passed) {
                Status::Pass
            } else {
                Status::Fail
            };
        }
    }

    pub fn fail_with(&mut self, e: &Error) {
        self.status = Status::Error;
        self.error = Some(Diagnostic::from(e));
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialises");
        text.push('\n');
        text
    }
}
