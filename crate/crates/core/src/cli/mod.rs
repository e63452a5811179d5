//! The `fdga` command-line front end: one verb per run, one JSON report out.

mod commands;
mod inputs;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};

pub use inputs::{ConeInput, Cover, GlueInput, RoundtripInput, SolutionDoc};
pub use report::{Check, Diagnostic, Report, Status, Timing};

use crate::error::Error;

/// Seed used by randomized checks when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;

/// Residual threshold for gauge checks when `--tol` is not given.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    /// Check a cohesive module document (Leibniz rule, flatness).
    Validate,
    /// Ext dimensions between one or two modules (exact backend).
    Ext,
    /// Mapping cone of a closed degree-0 map.
    Cone,
    /// Glue a triple over a two-set cover.
    Glue,
    /// Restrict/glue round trips on an input module and seeded samples.
    Roundtrip,
    /// Solve the gauge equation for a connection on a disc grid.
    GaugeSolve,
    /// Residuals of a stored gauge against its connection.
    GaugeVerify,
}

impl Verb {
    pub fn name(self) -> &'static str {
        match self {
            Verb::Validate => "validate",
            Verb::Ext => "ext",
            Verb::Cone => "cone",
            Verb::Glue => "glue",
            Verb::Roundtrip => "roundtrip",
            Verb::GaugeSolve => "gauge-solve",
            Verb::GaugeVerify => "gauge-verify",
        }
    }

    pub fn from_name(name: &str) -> Option<Verb> {
        Verb::value_variants()
            .iter()
            .copied()
            .find(|v| v.name() == name)
    }
}

/// Exact Dolbeault models, cohesive modules, descent and gauge fixing.
///
/// Every run prints one JSON report (or writes it to --output) and exits
/// with 0 when all checks pass, 1 when a check fails and 2 on bad input.
#[derive(Clone, Debug, Parser)]
#[command(name = "fdga", version)]
pub struct Args {
    #[arg(value_enum)]
    pub verb: Verb,
    /// Input document; repeat for verbs taking several.
    #[arg(short, long = "input", value_name = "PATH")]
    pub inputs: Vec<PathBuf>,
    /// Write the report here instead of stdout. gauge-solve also writes its
    /// solution fields next to this file.
    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Residual threshold for gauge checks.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Override the gauge grid resolution (fields are resampled).
    #[arg(long, value_name = "G")]
    pub grid: Option<usize>,
    /// Report zero elapsed time so reports are byte-reproducible.
    #[arg(long)]
    pub deterministic: bool,
}

/// Runs one command and returns its report; the exit code is
/// `report.status.exit_code()`.
pub fn run(args: &Args) -> Report {
    let start = Instant::now();
    let mut report = Report::new(args.verb.name(), args.seed);
    if let Err(e) = commands::dispatch(args, &mut report) {
        report.fail_with(&e);
    }
    report.finish();
    if !args.deterministic {
        report.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    }
    report
}

/// Report for arguments that could not be parsed.
pub fn usage_error(message: &str) -> Report {
    let mut report = Report::new("unknown", DEFAULT_SEED);
    report.fail_with(&Error::Invalid(message.trim().to_string()));
    report
}
