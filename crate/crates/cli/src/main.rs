//! `symtwirl` command-line frontend.
//!
//! JSON reports go to stdout, a short human-readable summary to stderr.
//! Exit codes: 0 success, 1 verification failure, 2 invalid input or size limit.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(err) => {
            eprintln!("error: {err}");
            commands::error_exit_code(&err)
        }
    }
}
