//! The `qeuler` command line: `compute`, `table`, `integrate` and `verify`.
//!
//! Exit codes: 0 on success, 1 when a computation fails (or the suite finds
//! an undocumented failure), 2 on a usage error.

pub mod args;
pub mod commands;
pub mod literal;

use std::time::Instant;

use clap::Parser;

pub use args::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl From<qeuler::NumericError> for CliError {
    fn from(e: qeuler::NumericError) -> Self {
        CliError::Compute(e.to_string())
    }
}

/// What a command wants printed, and how it wants to exit.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

pub fn execute(mut cli: Cli) -> Result<Outcome, CliError> {
    if let Some(path) = cli.config.take() {
        cli.command.merge_config(&path)?;
    }
    match &cli.command {
        Command::Compute(a) => commands::compute(a),
        Command::Table(a) => commands::table(a),
        Command::Integrate(a) => commands::integrate(a),
        Command::Verify(a) => commands::verify(a),
    }
}

/// Runs the process: parses `std::env::args`, prints, and returns the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let result = execute(cli);
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
