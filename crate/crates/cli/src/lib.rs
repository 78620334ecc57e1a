//! Command-line front end for `kaudit-core`: argument parsing, matrix files,
//! report formats and the exit-code contract.
//!
//! Exit codes: 0 every verdict passed, 1 a verdict failed or a certificate
//! was refuted, 2 usage or input errors, 3 regime or precondition errors.

pub mod args;
pub mod commands;
pub mod io;
pub mod report;
pub mod shard;

use std::io::Write;

use clap::Parser;

use args::Cli;
use commands::execute;

pub fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    run_parsed(&cli)
}

pub fn run_parsed(cli: &Cli) -> u8 {
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let text = outcome.report.render(cli.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return 2;
    }
    if outcome.passed {
        0
    } else {
        1
    }
}
