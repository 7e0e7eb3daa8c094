//! `quadturan` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure (witness printed),
//! 2 invalid configuration (nothing on stdout), 3 budget exhausted (the
//! truncated result is still printed).

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

/// Result status of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerifyFailed,
    BudgetExhausted,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers as usize)
        .build_global();
    if let Err(e) = pool {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerifyFailed) => ExitCode::from(1),
        Ok(Status::BudgetExhausted) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
