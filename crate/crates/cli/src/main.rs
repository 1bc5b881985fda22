use std::process::ExitCode;

use cgq_cli::args::Cli;
use cgq_cli::{execute, CliError};
use clap::Parser;

fn run() -> Result<bool, CliError> {
    let cfg = Cli::parse().into_config()?;
    let outcome = execute(&cfg)?;
    outcome.write()?;
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
