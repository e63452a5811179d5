use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use formal_dolbeault::cli::{run, usage_error, Args, Report};
use formal_dolbeault::gauge::with_worker_limit;

fn emit(report: &Report, output: Option<&std::path::Path>) -> ExitCode {
    let text = report.to_json();
    let code = report.status.exit_code();
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("fdga: cannot write {}: {e}", path.display());
                print!("{text}");
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{}", e.render());
            return emit(&usage_error(&e.kind().to_string()), None);
        }
    };
    let report = with_worker_limit(|| run(&args));
    emit(&report, args.output.as_deref())
}
