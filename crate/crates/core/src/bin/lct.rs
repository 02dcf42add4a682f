use std::io::Write;
use std::process::ExitCode;

use lct_core::cli::{run, BUDGET_ENV};

fn main() -> ExitCode {
    let budget = std::env::var(BUDGET_ENV).ok();
    let out = run(std::env::args_os(), budget.as_deref());
    // Ignore broken pipes; the exit code still reports the outcome.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.exit_code as u8)
}
