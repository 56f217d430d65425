use clap::Parser;

use persist_cli::commands::{self, Cli};

/// Exit codes: 0 success, 1 usage/config error, 2 at least one failing
/// bound report.
fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match commands::execute(cli) {
        Ok(outcome) => {
            if outcome.bound_failures > 0 {
                eprintln!("{} bound check(s) failed", outcome.bound_failures);
                std::process::exit(2);
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
