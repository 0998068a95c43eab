mod args;
mod commands;
mod error;
mod output;
mod verify;

use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let (table, common) = match commands::run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("klt: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = table.write(&common.out, common.format) {
        eprintln!("klt: {e}");
        return e.exit_code();
    }
    if table.failed() {
        eprintln!("klt: one or more checks exceeded their limit");
        return ExitCode::from(error::EXIT_NUMERICAL);
    }
    if !table.is_checks() && !table.all_converged() {
        eprintln!("klt: one or more rows did not reach the requested tolerance");
        return ExitCode::from(error::EXIT_NUMERICAL);
    }
    ExitCode::SUCCESS
}
