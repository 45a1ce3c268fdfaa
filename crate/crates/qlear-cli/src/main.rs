//! `qlear`: fit, apply, and benchmark the entropy-change classifier from
//! the command line.
//!
//! Exit codes are a stable scripting contract: 0 on success, 1 for usage
//! errors, 2 for data or file errors, 3 for numeric failures inside the
//! classifier.

mod cli;
mod commands;
mod error;
mod model;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let parsed = match cli::Cli::try_parse() {
        Ok(parsed) => parsed,
        Err(err) => {
            // Help and version requests print to stdout and succeed; real
            // grammar problems go to stderr with the usage exit code.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(parsed.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            ExitCode::from(err.exit_code())
        }
    }
}
